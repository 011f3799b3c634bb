#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qmcopt/sobol.hpp"

namespace qmcopt {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int n_points = 0;
};

// Least-squares line through (log2 x, log2 y). Needs at least three points
// and strictly positive coordinates; throws std::invalid_argument otherwise.
SlopeFit fit_rate(const std::vector<std::pair<double, double>>& points);

// Root-mean-square error of the batch-mean estimate of the integral of f
// over the unit cube against `truth`, across `reps` consecutive draws from
// the sampler (fresh randomizations under a randomizing mode).
double integration_rmse(
    const std::function<double(const Eigen::RowVectorXd&)>& f,
    BatchSampler& sampler, int n, int reps, double truth);

}  // namespace qmcopt
