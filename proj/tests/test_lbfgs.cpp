#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "oracles.hpp"
#include "qmcopt/lbfgs.hpp"

using namespace qmcopt;

namespace {

using Pair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

// Random pairs with positive curvature, built from an SPD quadratic so the
// buffer accepts every one of them.
std::vector<Pair> random_pairs(int count, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = normal(rng);
  const Eigen::MatrixXd A =
      B * B.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
  std::vector<Pair> pairs;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd s(d);
    for (int j = 0; j < d; ++j) s(j) = normal(rng);
    pairs.emplace_back(s, A * s);
  }
  return pairs;
}

}  // namespace

TEST_CASE("empty buffer leaves the gradient untouched") {
  LbfgsBuffer buf(5);
  CHECK(buf.empty());
  CHECK(buf.gamma() == 1.0);
  Eigen::VectorXd g(3);
  g << 1.0, -2.0, 0.5;
  CHECK((two_loop(buf, g) - g).norm() == 0.0);
}

TEST_CASE("single pair reproduces the closed-form bfgs update") {
  const int d = 4;
  LbfgsBuffer buf(5);
  Eigen::VectorXd s(d), y(d);
  s << 1.0, 0.5, -0.3, 0.2;
  y << 2.0, 0.4, -0.1, 0.6;
  REQUIRE(buf.insert(s, y));

  const double rho = 1.0 / s.dot(y);
  const double gamma = s.dot(y) / y.dot(y);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd H = (I - rho * s * y.transpose()) * gamma *
                                (I - rho * y * s.transpose()) +
                            rho * s * s.transpose();
  Eigen::VectorXd g(d);
  g << 0.3, -1.0, 0.8, 0.1;
  CHECK((two_loop(buf, g) - H * g).norm() <= 1e-14 * H.norm());
}

TEST_CASE("two loop matches the dense recursion on random instances") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int inst = 0; inst < 50; ++inst) {
    const int d = 2 + inst % 4;
    const int count = 1 + inst % 7;
    const int memory = 1 + inst % 5;
    const auto pairs = random_pairs(count, d, 1000 + inst);

    LbfgsBuffer buf(memory);
    for (const auto& [s, y] : pairs) buf.insert(s, y);

    // The oracle sees only what the ring kept: the most recent `memory`.
    std::vector<Pair> kept(pairs.end() - std::min<std::size_t>(memory, pairs.size()),
                           pairs.end());
    const Eigen::MatrixXd H = oracle::dense_bfgs(kept, d);

    Eigen::VectorXd g(d);
    for (int j = 0; j < d; ++j) g(j) = normal(rng);
    const Eigen::VectorXd hg = two_loop(buf, g);
    CHECK((hg - H * g).norm() <= 1e-10 * (1.0 + (H * g).norm()));
  }
}

TEST_CASE("curvature gate rejects flat and negative pairs") {
  LbfgsBuffer buf(3);
  Eigen::VectorXd s(2), y(2);
  s << 1.0, 0.0;
  y << -1.0, 0.0;  // s'y < 0
  CHECK(!buf.insert(s, y));
  CHECK(buf.size() == 0);
  y << 0.0, 1.0;  // s'y = 0
  CHECK(!buf.insert(s, y));
  // Tiny positive curvature below the relative gate.
  y << 1e-9, 1.0;
  CHECK(!buf.insert(s, y));
  CHECK(buf.empty());
  // Healthy curvature is accepted.
  y << 1.0, 0.2;
  CHECK(buf.insert(s, y));
  CHECK(buf.size() == 1);
}

TEST_CASE("ring evicts the oldest pair at capacity") {
  LbfgsBuffer buf(3);
  for (int k = 1; k <= 5; ++k) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(2);
    s(0) = static_cast<double>(k);
    Eigen::VectorXd y = s;  // s'y = k^2 > 0
    REQUIRE(buf.insert(s, y));
  }
  CHECK(buf.size() == 3);
  // Oldest survivor is the third insert.
  CHECK(buf.pair(0).s(0) == 3.0);
  CHECK(buf.pair(2).s(0) == 5.0);
  CHECK(buf.pair(0).rho == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("implied inverse hessian is spd and satisfies the secant equation") {
  const int d = 5;
  const auto pairs = random_pairs(6, d, 42);
  LbfgsBuffer buf(4);
  for (const auto& [s, y] : pairs) buf.insert(s, y);
  REQUIRE(buf.size() == 4);

  const Eigen::MatrixXd H = dense_inverse_hessian(buf, d);
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * H.norm());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // Columns agree with two_loop applied to basis vectors.
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd hj = two_loop(buf, Eigen::VectorXd::Unit(d, j));
    CHECK((H.col(j) - hj).norm() <= 1e-13 * (1.0 + hj.norm()));
  }

  // BFGS guarantees H y = s for the newest pair.
  const CorrectionPair& newest = buf.pair(buf.size() - 1);
  CHECK((H * newest.y - newest.s).norm() <= 1e-12 * (1.0 + newest.s.norm()));
}

TEST_CASE("buffer rejects a nonpositive memory") {
  CHECK_THROWS_AS(LbfgsBuffer(0), std::invalid_argument);
  CHECK_THROWS_AS(LbfgsBuffer(-2), std::invalid_argument);
}

namespace {

// Deterministic anisotropic quadratic used by the line-search cases.
std::pair<double, Eigen::VectorXd> stiff_quadratic(const Eigen::VectorXd& x) {
  Eigen::Vector2d diag(1.0, 100.0);
  const Eigen::VectorXd Ax = diag.cwiseProduct(x);
  return {0.5 * x.dot(Ax), Ax};
}

}  // namespace

TEST_CASE("wolfe search satisfies both conditions on a stiff quadratic") {
  Eigen::Vector2d theta(1.0, 1.0);
  const auto [f0, g0] = stiff_quadratic(theta);
  const Eigen::VectorXd p = -g0;
  WolfeConfig cfg;
  int evals_seen = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals_seen;
    return stiff_quadratic(x);
  };
  const LineSearchResult res = wolfe_line_search(eval, theta, p, f0, g0, cfg);
  CHECK(res.descent);
  CHECK(res.satisfied);
  CHECK(res.evals == evals_seen);
  CHECK(res.evals <= cfg.max_evals);

  // Verify the strong Wolfe conditions by hand at the returned step.
  const double dphi0 = g0.dot(p);
  const auto [fa, ga] = stiff_quadratic(theta + res.alpha * p);
  CHECK(fa <= f0 + cfg.c1 * res.alpha * dphi0);
  CHECK(std::abs(ga.dot(p)) <= cfg.c2 * std::abs(dphi0));
}

TEST_CASE("wolfe search flags a non-descent direction without evaluating") {
  Eigen::Vector2d theta(1.0, 1.0);
  const auto [f0, g0] = stiff_quadratic(theta);
  const Eigen::VectorXd p = g0;  // uphill
  WolfeConfig cfg;
  int evals_seen = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals_seen;
    return stiff_quadratic(x);
  };
  const LineSearchResult res = wolfe_line_search(eval, theta, p, f0, g0, cfg);
  CHECK(!res.descent);
  CHECK(!res.satisfied);
  CHECK(res.alpha == cfg.fallback_step);
  CHECK(res.evals == 0);
  CHECK(evals_seen == 0);
}

TEST_CASE("wolfe search falls back when the curvature condition is unreachable") {
  // A linear objective keeps |dphi| constant, so the strong curvature
  // condition never holds and the budget runs out.
  Eigen::VectorXd c(2);
  c << 1.0, 2.0;
  auto eval = [&](const Eigen::VectorXd& x) {
    return std::make_pair(c.dot(x), Eigen::VectorXd(c));
  };
  Eigen::Vector2d theta(0.0, 0.0);
  const auto [f0, g0] = eval(theta);
  const Eigen::VectorXd p = -g0;
  WolfeConfig cfg;
  const LineSearchResult res = wolfe_line_search(eval, theta, p, f0, g0, cfg);
  CHECK(res.descent);
  CHECK(!res.satisfied);
  CHECK(res.alpha == cfg.fallback_step);
  CHECK(res.evals == cfg.max_evals);
}
