#include "qmcopt/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace qmcopt {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kGridMin = 2.3283064365386963e-10;  // 2^-32

// Acklam's rational approximation to the normal quantile, relative error
// about 1.2e-9; accuracy is then driven by the Halley refinement.
double quantile_guess(double u) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // central region, p_low <= u <= 0.5
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double inv_normal_cdf(double u) {
  if (std::isnan(u)) throw std::invalid_argument("inv_normal_cdf: NaN input");
  if (u <= 0.0) u = kGridMin;
  if (u >= 1.0) u = 1.0 - kGridMin;
  // solve on the lower-tail side to avoid cancellation near 1
  const bool flip = u > 0.5;
  double q = flip ? 1.0 - u : u;
  if (q < 1e-280) q = 1e-280;  // keep erfc and the pdf in normal range
  double x = quantile_guess(q);  // x <= 0
  // one Halley step on Phi(x) - q = 0
  const double err = normal_cdf(x) - q;
  const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  const double t = err / pdf;
  x -= t / (1.0 + 0.5 * t * x);
  return flip ? -x : x;
}

Eigen::MatrixXd to_normal(const SampleBatch& batch) {
  Eigen::MatrixXd z(batch.points.rows(), batch.points.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i)
      z(i, j) = inv_normal_cdf(batch.points(i, j));
  return z;
}

Eigen::VectorXd reparameterize(const Eigen::VectorXd& z,
                               const DiagGaussian& q) {
  if (z.size() != q.mu.size() || z.size() != q.log_sigma.size())
    throw std::invalid_argument("reparameterize: dimension mismatch");
  return q.mu.array() + q.log_sigma.array().exp() * z.array();
}

DiagGaussian unpack_theta(const Eigen::VectorXd& theta) {
  if (theta.size() % 2 != 0)
    throw std::invalid_argument("unpack_theta: odd-length theta");
  const Eigen::Index d = theta.size() / 2;
  return DiagGaussian{theta.head(d), theta.tail(d)};
}

}  // namespace qmcopt
