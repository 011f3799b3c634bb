#include "qmcopt/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace qmcopt {

SlopeFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_rate: need at least 3 points");
  const int n = static_cast<int>(points.size());
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (!(points[static_cast<std::size_t>(i)].first > 0.0) ||
        !(points[static_cast<std::size_t>(i)].second > 0.0))
      throw std::invalid_argument("fit_rate: coordinates must be positive");
    x(i) = std::log2(points[static_cast<std::size_t>(i)].first);
    y(i) = std::log2(points[static_cast<std::size_t>(i)].second);
  }
  const double xm = x.mean(), ym = y.mean();
  const Eigen::VectorXd xc = x.array() - xm;
  const double sxx = xc.squaredNorm();
  if (!(sxx > 0.0))
    throw std::invalid_argument("fit_rate: degenerate abscissae");
  SlopeFit fit;
  fit.n_points = n;
  fit.slope = xc.dot(y) / sxx;
  fit.intercept = ym - fit.slope * xm;
  const Eigen::VectorXd resid =
      y.array() - (fit.intercept + fit.slope * x.array());
  fit.rms_residual = std::sqrt(resid.squaredNorm() / n);
  return fit;
}

double integration_rmse(
    const std::function<double(const Eigen::RowVectorXd&)>& f,
    BatchSampler& sampler, int n, int reps, double truth) {
  if (n < 1 || reps < 1)
    throw std::invalid_argument("integration_rmse: sizes must be positive");
  double sq_sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    const SampleBatch batch = sampler.draw(n);
    double mean = 0.0;
    for (int i = 0; i < batch.n(); ++i) mean += f(batch.points.row(i));
    mean /= static_cast<double>(n);
    sq_sum += (mean - truth) * (mean - truth);
  }
  return std::sqrt(sq_sum / reps);
}

}  // namespace qmcopt
