#include "oracles.hpp"

namespace oracle {

double radical_inverse(std::uint32_t i) {
  double value = 0.0;
  double scale = 0.5;
  for (; i != 0; i >>= 1, scale *= 0.5)
    if (i & 1u) value += scale;
  return value;
}

Eigen::MatrixXd dense_bfgs(
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
    int d) {
  double gamma = 1.0;
  if (!pairs.empty()) {
    const auto& [s, y] = pairs.back();
    gamma = s.dot(y) / y.dot(y);
  }
  Eigen::MatrixXd H = gamma * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  for (const auto& [s, y] : pairs) {
    const double rho = 1.0 / y.dot(s);
    H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
        rho * s * s.transpose();
  }
  return H;
}

}  // namespace oracle
