#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "qmcopt/highprec.hpp"
#include "qmcopt/normal.hpp"
#include "qmcopt/sobol.hpp"

using namespace qmcopt;

namespace {

// Grid pushing into both tails: log-spaced in u and in 1-u plus a dense
// uniform stripe through the middle.
std::vector<double> tail_heavy_grid() {
  std::vector<double> us;
  for (int e = 1; e <= 100; ++e) {
    const double u = std::pow(10.0, -10.0 * e / 100.0);
    us.push_back(u);
    us.push_back(1.0 - u);
  }
  for (int i = 1; i < 200; ++i) us.push_back(i / 200.0);
  std::sort(us.begin(), us.end());
  return us;
}

}  // namespace

TEST_CASE("inverse cdf round trips through the high precision cdf") {
  // The acceptance gate checks a coarser uniform grid; here we hammer the
  // tails down to u = 1e-10 where a naive rational approximation loses
  // digits.
  double worst = 0.0;
  for (double u : tail_heavy_grid()) {
    const double x = inv_normal_cdf(u);
    worst = std::max(worst, std::abs(normal_cdf_highprec(x) - u));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("inverse cdf matches tabulated quantiles") {
  CHECK(inv_normal_cdf(0.5) == 0.0);
  // Classic two-sided 95% point.
  CHECK(inv_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(inv_normal_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-13));
  // One-sided 99.9%.
  CHECK(inv_normal_cdf(0.999) == doctest::Approx(3.090232306167814).epsilon(1e-13));
}

TEST_CASE("inverse cdf is antisymmetric and monotone") {
  // Antisymmetry only makes sense where 1-u is exactly representable, else
  // the rounding of the complement gets amplified by the tail derivative
  // 1/phi(x). Dyadic u keeps the complement exact.
  for (int k = 1; k <= 30; ++k) {
    const double u = std::ldexp(1.0, -k);
    CHECK(inv_normal_cdf(1.0 - u) == doctest::Approx(-inv_normal_cdf(u)).epsilon(1e-13));
  }
  for (int j = 1; j < 256; ++j) {
    const double u = j / 256.0;
    CHECK(inv_normal_cdf(1.0 - u) == doctest::Approx(-inv_normal_cdf(u)).epsilon(1e-13));
  }
  double prev = -std::numeric_limits<double>::infinity();
  for (double u : tail_heavy_grid()) {
    const double x = inv_normal_cdf(u);
    CHECK(x >= prev);
    prev = x;
  }
}

TEST_CASE("inverse cdf clamps endpoints to the sampler grid") {
  const double lo = std::ldexp(1.0, -32);
  CHECK(inv_normal_cdf(0.0) == inv_normal_cdf(lo));
  CHECK(inv_normal_cdf(1.0) == inv_normal_cdf(1.0 - lo));
  CHECK(inv_normal_cdf(-0.25) == inv_normal_cdf(lo));
  CHECK(inv_normal_cdf(1.25) == inv_normal_cdf(1.0 - lo));
  CHECK(std::isfinite(inv_normal_cdf(0.0)));
  CHECK(inv_normal_cdf(1.0) == -inv_normal_cdf(0.0));
}

TEST_CASE("erfc based cdf agrees with the high precision oracle") {
  CHECK(normal_cdf(0.0) == 0.5);
  for (double x = -8.0; x <= 8.0; x += 0.173) {
    const double ref = normal_cdf_highprec(x);
    CHECK(std::abs(normal_cdf(x) - ref) <= 1e-14 + 1e-14 * std::abs(ref));
  }
}

TEST_CASE("to_normal applies the inverse cdf elementwise") {
  SobolSampler sampler(5, Randomize::LinearScramble, 7);
  const SampleBatch batch = sampler.draw(64);
  const Eigen::MatrixXd z = to_normal(batch);
  REQUIRE(z.rows() == batch.points.rows());
  REQUIRE(z.cols() == batch.points.cols());
  for (int i = 0; i < z.rows(); ++i) {
    for (int j = 0; j < z.cols(); ++j) {
      CHECK(z(i, j) == inv_normal_cdf(batch.points(i, j)));
    }
  }
}

TEST_CASE("transformed scrambled batch has standard normal moments") {
  SobolSampler sampler(4, Randomize::LinearScramble, 19);
  const Eigen::MatrixXd z = to_normal(sampler.draw(4096));
  for (int j = 0; j < z.cols(); ++j) {
    const double mean = z.col(j).mean();
    const double var = (z.col(j).array() - mean).square().sum() / (z.rows() - 1);
    CHECK(std::abs(mean) <= 0.05);
    CHECK(std::abs(var - 1.0) <= 0.05);
  }
}

TEST_CASE("reparameterize and unpack_theta round trip") {
  Eigen::VectorXd theta(6);
  theta << 1.0, -2.0, 0.5, std::log(2.0), std::log(0.5), 0.0;
  const DiagGaussian q = unpack_theta(theta);
  REQUIRE(q.dim() == 3);
  CHECK(q.mu(0) == 1.0);
  CHECK(q.mu(2) == 0.5);
  CHECK(q.sigma()(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(q.sigma()(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q.sigma()(2) == 1.0);

  Eigen::VectorXd z(3);
  z << 1.0, 2.0, -1.0;
  const Eigen::VectorXd beta = reparameterize(z, q);
  CHECK(beta(0) == doctest::Approx(1.0 + 2.0 * 1.0).epsilon(1e-15));
  CHECK(beta(1) == doctest::Approx(-2.0 + 0.5 * 2.0).epsilon(1e-15));
  CHECK(beta(2) == doctest::Approx(0.5 - 1.0).epsilon(1e-15));
}
