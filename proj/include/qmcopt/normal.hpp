#pragma once

#include <Eigen/Core>

#include "qmcopt/sobol.hpp"

namespace qmcopt {

// Standard normal CDF via erfc.
double normal_cdf(double x);

// Inverse standard normal CDF. Rational initial guess refined by one
// Halley step against the erfc-based CDF, solved on the q = min(u, 1-u)
// side so both tails keep full relative accuracy. Inputs at or beyond the
// endpoints are clamped to the representable sampler grid, [2^-32, 1-2^-32];
// interior values are inverted as given.
double inv_normal_cdf(double u);

// Elementwise inverse CDF of a uniform batch: rows stay samples, columns
// become independent standard normal coordinates.
Eigen::MatrixXd to_normal(const SampleBatch& batch);

// Mean-field Gaussian in the unconstrained parameterization used
// throughout: theta = (mu, log_sigma), both length d.
struct DiagGaussian {
  Eigen::VectorXd mu;
  Eigen::VectorXd log_sigma;

  int dim() const { return static_cast<int>(mu.size()); }
  Eigen::VectorXd sigma() const { return log_sigma.array().exp().matrix(); }
};

// Location-scale map beta = mu + sigma .* z.
Eigen::VectorXd reparameterize(const Eigen::VectorXd& z, const DiagGaussian& q);

// Splits a packed theta = (mu, log_sigma) vector of even length.
DiagGaussian unpack_theta(const Eigen::VectorXd& theta);

}  // namespace qmcopt
