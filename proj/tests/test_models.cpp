#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "doctest.h"
#include "oracles.hpp"
#include "qmcopt/models.hpp"
#include "qmcopt/normal.hpp"
#include "qmcopt/sobol.hpp"

using namespace qmcopt;

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double kl_term(double mu, double ls) {
  const double s2 = std::exp(2.0 * ls);
  return 0.5 * (s2 + mu * mu - 1.0) - ls;
}

double kl_hand(const Eigen::VectorXd& theta) {
  const int d = static_cast<int>(theta.size()) / 2;
  double v = 0.0;
  for (int j = 0; j < d; ++j) v += kl_term(theta(j), theta(d + j));
  return v;
}

Eigen::VectorXd zeta_of(const Eigen::VectorXd& z, const Eigen::VectorXd& theta) {
  const int d = static_cast<int>(z.size());
  Eigen::VectorXd zeta(d);
  for (int j = 0; j < d; ++j) zeta(j) = theta(j) + std::exp(theta(d + j)) * z(j);
  return zeta;
}

double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// Independent transcription of each integrand, kept deliberately naive.
double linreg_hand(const LinRegData& D, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& theta) {
  const Eigen::VectorXd zeta = zeta_of(z, theta);
  const double n = static_cast<double>(D.X.rows());
  const double g2 = D.gamma * D.gamma;
  return 0.5 * n * std::log(2.0 * M_PI * g2) +
         0.5 * (D.X * zeta - D.y).squaredNorm() / g2 + kl_hand(theta);
}

double logreg_hand(const LogRegData& D, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& theta) {
  const Eigen::VectorXd zeta = zeta_of(z, theta);
  double v = 0.0;
  for (Eigen::Index i = 0; i < D.X.rows(); ++i) {
    v += softplus(-D.y(i) * D.X.row(i).dot(zeta));
  }
  return v + kl_hand(theta);
}

double crossed_hand(const CrossedData& D, const Eigen::VectorXd& z,
                    const Eigen::VectorXd& theta) {
  const Eigen::VectorXd zeta = zeta_of(z, theta);
  const int I = static_cast<int>(D.Y.rows());
  const int J = static_cast<int>(D.Y.cols());
  const double mu = zeta(0);
  const double la = zeta(1);
  const double lb = zeta(2);
  const Eigen::VectorXd a = zeta.segment(3, I);
  const Eigen::VectorXd b = zeta.segment(3 + I, J);
  double phi = 0.0;
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      const double r = D.Y(i, j) - mu - a(i) - b(j);
      phi += 0.5 * (kLog2Pi + r * r);
    }
  }
  phi += I * (0.5 * kLog2Pi + la) + 0.5 * std::exp(-2.0 * la) * a.squaredNorm();
  phi += J * (0.5 * kLog2Pi + lb) + 0.5 * std::exp(-2.0 * lb) * b.squaredNorm();
  const int d = I + J + 3;
  double det = 0.0;
  for (int k = 0; k < 3; ++k) det += kl_term(theta(k), theta(d + k));
  for (int k = 3; k < d; ++k) det -= 0.5 * (kLog2Pi + 1.0) + theta(d + k);
  return phi + det;
}

// Repeatable off-zero test points sized to a problem.
Eigen::VectorXd test_theta(int d2, double scale) {
  Eigen::VectorXd theta(d2);
  for (int j = 0; j < d2; ++j) theta(j) = scale * std::sin(1.7 * j + 0.3);
  return theta;
}

Eigen::VectorXd test_z(int d) {
  Eigen::VectorXd z(d);
  for (int j = 0; j < d; ++j) z(j) = std::cos(2.3 * j + 0.9);
  return z;
}

void check_pointwise_derivatives(const VBProblem& m) {
  const Eigen::VectorXd theta = test_theta(m.param_dim(), 0.4);
  const Eigen::VectorXd z = test_z(m.sample_dim());
  const Eigen::VectorXd g = m.gradient(z, theta);
  const Eigen::VectorXd g_fd = oracle::fd_gradient(
      [&](const Eigen::VectorXd& th) { return m.value(z, th); }, theta);
  CHECK((g_fd - g).norm() <= 1e-6 * (1.0 + g.norm()));

  const Eigen::VectorXd v = test_theta(m.param_dim(), 1.0);
  const Eigen::VectorXd hv = m.hess_vec(z, theta, v);
  const double h = 1e-5;
  const Eigen::VectorXd hv_fd =
      (m.gradient(z, theta + h * v) - m.gradient(z, theta - h * v)) / (2.0 * h);
  CHECK((hv_fd - hv).norm() <= 2e-5 * (1.0 + hv.norm()));
}

void check_batch_matches_loop(const VBProblem& m, const Eigen::MatrixXd& Z) {
  const Eigen::VectorXd theta = test_theta(m.param_dim(), 0.3);
  double f_mean = 0.0;
  Eigen::VectorXd g_mean;
  m.batch_value_grad(Z, theta, f_mean, g_mean);

  double f_loop = 0.0;
  Eigen::VectorXd g_loop = Eigen::VectorXd::Zero(m.param_dim());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    f_loop += m.value(Z.row(i).transpose(), theta);
    g_loop += m.gradient(Z.row(i).transpose(), theta);
  }
  f_loop /= static_cast<double>(Z.rows());
  g_loop /= static_cast<double>(Z.rows());
  CHECK(f_mean == doctest::Approx(f_loop).epsilon(1e-12));
  CHECK((g_mean - g_loop).norm() <= 1e-12 * (1.0 + g_loop.norm()));

  const Eigen::VectorXd v = test_theta(m.param_dim(), 0.8);
  const Eigen::VectorXd hv = m.batch_hess_vec(Z, theta, v);
  Eigen::VectorXd hv_loop = Eigen::VectorXd::Zero(m.param_dim());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    hv_loop += m.hess_vec(Z.row(i).transpose(), theta, v);
  }
  hv_loop /= static_cast<double>(Z.rows());
  CHECK((hv - hv_loop).norm() <= 1e-12 * (1.0 + hv_loop.norm()));
}

Eigen::MatrixXd normal_batch(int n, int dim, std::uint64_t seed) {
  SobolSampler s(dim, Randomize::LinearScramble, seed);
  return to_normal(s.draw(n));
}

}  // namespace

TEST_CASE("analytic gaussian kl matches hand values and finite differences") {
  DiagGaussian q;
  q.mu = Eigen::Vector2d(1.0, 0.0);
  q.log_sigma = Eigen::Vector2d(std::log(2.0), std::log(2.0));
  CHECK(kl_standard_normal(q) ==
        doctest::Approx(3.5 - 2.0 * std::log(2.0)).epsilon(1e-14));

  Eigen::VectorXd theta(4);
  theta << 1.0, 0.0, std::log(2.0), std::log(2.0);
  const Eigen::VectorXd g = kl_standard_normal_grad(q);
  REQUIRE(g.size() == 4);
  CHECK(g(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(1) == doctest::Approx(0.0).scale(1.0));
  CHECK(g(2) == doctest::Approx(3.0).epsilon(1e-14));  // sigma^2 - 1
  CHECK(g(3) == doctest::Approx(3.0).epsilon(1e-14));

  const Eigen::VectorXd th = test_theta(6, 0.5);
  const Eigen::VectorXd gg = kl_standard_normal_grad(unpack_theta(th));
  const Eigen::VectorXd gg_fd = oracle::fd_gradient(
      [](const Eigen::VectorXd& t) { return kl_standard_normal(unpack_theta(t)); },
      th);
  CHECK((gg_fd - gg).norm() <= 1e-8);
}

TEST_CASE("linreg integrand matches the independent formula pointwise") {
  const LinRegData D = make_linreg_data(12, 3, 0.7, 5);
  LinRegModel m(D);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd theta = test_theta(6, 0.2 + 0.1 * trial);
    const Eigen::VectorXd z = test_z(3) * (1.0 + 0.2 * trial);
    CHECK(m.value(z, theta) ==
          doctest::Approx(linreg_hand(D, z, theta)).epsilon(1e-12));
  }
}

TEST_CASE("logreg integrand matches the independent formula pointwise") {
  const LogRegData D = make_logreg_data(10, 3, 7);
  LogRegModel m(D);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd theta = test_theta(6, 0.2 + 0.1 * trial);
    const Eigen::VectorXd z = test_z(3) * (1.0 + 0.2 * trial);
    CHECK(m.value(z, theta) ==
          doctest::Approx(logreg_hand(D, z, theta)).epsilon(1e-12));
  }
}

TEST_CASE("crossed integrand matches the independent formula pointwise") {
  const CrossedData D = make_crossed_data(4, 3, 11);
  CrossedModel m(D);
  REQUIRE(m.latent_dim() == 10);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd theta = test_theta(20, 0.15 + 0.05 * trial);
    const Eigen::VectorXd z = test_z(10) * (1.0 + 0.2 * trial);
    CHECK(m.value(z, theta) ==
          doctest::Approx(crossed_hand(D, z, theta)).epsilon(1e-12));
  }
}

TEST_CASE("pointwise gradients and hessian products agree with differences") {
  LinRegModel linreg(make_linreg_data(12, 3, 0.7, 5));
  LogRegModel logreg(make_logreg_data(10, 3, 7));
  CrossedModel crossed(make_crossed_data(4, 3, 11));
  QuadraticProblem quad(Eigen::Vector3d(1.0, 3.0, 7.0),
                        Eigen::Vector3d(1.0, -1.0, 2.0), 0.3);
  check_pointwise_derivatives(linreg);
  check_pointwise_derivatives(logreg);
  check_pointwise_derivatives(crossed);
  check_pointwise_derivatives(quad);
}

TEST_CASE("batch means equal looped pointwise evaluations") {
  LinRegModel linreg(make_linreg_data(12, 3, 0.7, 5));
  LogRegModel logreg(make_logreg_data(10, 3, 7));
  CrossedModel crossed(make_crossed_data(4, 3, 11));
  QuadraticProblem quad(Eigen::Vector3d(1.0, 3.0, 7.0),
                        Eigen::Vector3d(1.0, -1.0, 2.0), 0.3);
  check_batch_matches_loop(linreg, normal_batch(33, 3, 1));
  check_batch_matches_loop(logreg, normal_batch(33, 3, 2));
  check_batch_matches_loop(crossed, normal_batch(17, 10, 3));
  check_batch_matches_loop(quad, normal_batch(33, 3, 4));
}

TEST_CASE("linreg optimum solves the conjugate normal equations") {
  const LinRegData D = make_linreg_data(25, 4, 0.8, 13);
  LinRegModel m(D);
  REQUIRE(m.has_optimum());

  const double g2 = D.gamma * D.gamma;
  const Eigen::MatrixXd A =
      D.X.transpose() * D.X / g2 + Eigen::MatrixXd::Identity(4, 4);
  const Eigen::VectorXd mu_star = A.ldlt().solve(D.X.transpose() * D.y / g2);
  const Eigen::VectorXd opt = m.optimum();
  REQUIRE(opt.size() == 8);
  CHECK((opt.head(4) - mu_star).norm() <= 1e-10);
  for (int j = 0; j < 4; ++j) {
    const double ls = -0.5 * std::log1p(D.X.col(j).squaredNorm() / g2);
    CHECK(opt(4 + j) == doctest::Approx(ls).epsilon(1e-12));
  }
  CHECK(m.objective_gradient(opt).norm() <= 1e-8);
}

TEST_CASE("linreg objective matches the independent closed form") {
  const LinRegData D = make_linreg_data(25, 4, 0.8, 13);
  LinRegModel m(D);
  REQUIRE(m.has_objective());
  const Eigen::VectorXd theta = test_theta(8, 0.3);
  const Eigen::VectorXd mu = theta.head(4);
  const Eigen::VectorXd s2 = theta.tail(4).array().exp().square().matrix();
  const double g2 = D.gamma * D.gamma;
  double quad_term = (D.X * mu - D.y).squaredNorm();
  for (int j = 0; j < 4; ++j) quad_term += s2(j) * D.X.col(j).squaredNorm();
  const double hand = 0.5 * D.X.rows() * std::log(2.0 * M_PI * g2) +
                      0.5 * quad_term / g2 + kl_hand(theta);
  CHECK(m.objective(theta) == doctest::Approx(hand).epsilon(1e-12));

  const Eigen::VectorXd g_fd = oracle::fd_gradient(
      [&](const Eigen::VectorXd& t) { return m.objective(t); }, theta);
  CHECK((g_fd - m.objective_gradient(theta)).norm() <= 1e-6);
}

TEST_CASE("quadratic problem is exact in closed form") {
  const Eigen::Vector3d spec(1.0, 3.0, 7.0);
  const Eigen::Vector3d tstar(1.0, -1.0, 2.0);
  QuadraticProblem m(spec, tstar, 0.3);
  CHECK(m.strong_convexity() == 1.0);
  CHECK(m.smoothness() == 7.0);
  CHECK(m.tau() == 0.3);
  CHECK((m.optimum() - tstar).norm() == 0.0);

  const Eigen::Vector3d theta(0.5, 0.5, -0.5);
  const Eigen::Vector3d z(0.7, -1.1, 0.4);
  const Eigen::Vector3d delta = theta - tstar;
  const double val_hand =
      0.5 * delta.dot(spec.cwiseProduct(delta)) + 0.3 * z.dot(theta);
  CHECK(m.value(z, theta) == doctest::Approx(val_hand).epsilon(1e-14));
  const Eigen::Vector3d g_hand = spec.cwiseProduct(delta) + 0.3 * z;
  CHECK((m.gradient(z, theta) - g_hand).norm() <= 1e-14);
  const Eigen::Vector3d v(1.0, 2.0, -1.0);
  CHECK((m.hess_vec(z, theta, v) - spec.cwiseProduct(v)).norm() == 0.0);
  CHECK(m.objective(theta) ==
        doctest::Approx(0.5 * delta.dot(spec.cwiseProduct(delta))).epsilon(1e-14));
  CHECK((m.objective_gradient(theta) - spec.cwiseProduct(delta)).norm() == 0.0);

  // Bounded-noise variant maps uniforms through sqrt(12) (u - 1/2).
  QuadraticProblem mu01(spec, tstar, 0.3, BaseDraws::Uniform01);
  CHECK(mu01.base() == BaseDraws::Uniform01);
  const Eigen::Vector3d u(0.1, 0.5, 0.9);
  const Eigen::Vector3d psi = std::sqrt(12.0) * (u.array() - 0.5).matrix();
  const double val01 =
      0.5 * delta.dot(spec.cwiseProduct(delta)) + 0.3 * psi.dot(theta);
  CHECK(mu01.value(u, theta) == doctest::Approx(val01).epsilon(1e-14));
  CHECK((mu01.gradient(u, theta) - (spec.cwiseProduct(delta) + 0.3 * psi)).norm() <=
        1e-14);

  CHECK_THROWS_AS(QuadraticProblem(Eigen::Vector2d(1.0, 2.0),
                                   Eigen::Vector3d::Zero(), 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuadraticProblem(Eigen::Vector2d(1.0, -2.0),
                                   Eigen::Vector2d::Zero(), 0.1),
                  std::invalid_argument);
}

TEST_CASE("data generators are reproducible and shaped correctly") {
  const LinRegData a = make_linreg_data(12, 3, 0.7, 5);
  const LinRegData b = make_linreg_data(12, 3, 0.7, 5);
  const LinRegData c = make_linreg_data(12, 3, 0.7, 6);
  REQUIRE(a.X.rows() == 12);
  REQUIRE(a.X.cols() == 3);
  REQUIRE(a.y.size() == 12);
  CHECK(a.gamma == 0.7);
  CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.X - c.X).cwiseAbs().maxCoeff() > 0.0);

  const LogRegData la = make_logreg_data(10, 3, 7);
  const LogRegData lb = make_logreg_data(10, 3, 7);
  CHECK((la.X - lb.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((la.y - lb.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((la.y.array().abs() == 1.0).all());

  const CrossedData ca = make_crossed_data(4, 3, 11);
  const CrossedData cb = make_crossed_data(4, 3, 11);
  REQUIRE(ca.Y.rows() == 4);
  REQUIRE(ca.Y.cols() == 3);
  CHECK((ca.Y - cb.Y).cwiseAbs().maxCoeff() == 0.0);

  LinRegModel m(a);
  CHECK(m.init_theta().size() == 6);
  CHECK(m.init_theta().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("problems without closed forms refuse the oracle calls") {
  LogRegModel logreg(make_logreg_data(10, 3, 7));
  CrossedModel crossed(make_crossed_data(4, 3, 11));
  CHECK(!logreg.has_optimum());
  CHECK(!logreg.has_objective());
  CHECK_THROWS_AS(logreg.optimum(), std::logic_error);
  CHECK_THROWS_AS(logreg.objective(Eigen::VectorXd::Zero(6)), std::logic_error);
  CHECK(!crossed.has_optimum());
  CHECK_THROWS_AS(crossed.optimum(), std::logic_error);
  // Labels outside {-1, +1} are rejected up front.
  LogRegData bad = make_logreg_data(10, 3, 7);
  bad.y(0) = 0.0;
  CHECK_THROWS_AS(LogRegModel{bad}, std::invalid_argument);
}
