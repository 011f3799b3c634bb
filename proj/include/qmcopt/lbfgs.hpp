#pragma once

#include <deque>
#include <functional>
#include <utility>

#include <Eigen/Core>

namespace qmcopt {

struct CorrectionPair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho = 0.0;  // 1 / (s'y)
};

// Ring buffer of curvature pairs with the usual acceptance gate.
class LbfgsBuffer {
 public:
  static constexpr double kCurvatureEps = 1e-8;

  explicit LbfgsBuffer(int memory);

  int memory() const { return memory_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  bool empty() const { return pairs_.empty(); }

  // Appends (s, y) if s'y > eps ||s|| ||y||, dropping the oldest pair at
  // capacity. Returns whether the pair was accepted.
  bool insert(const Eigen::VectorXd& s, const Eigen::VectorXd& y);

  // i = 0 is the oldest stored pair.
  const CorrectionPair& pair(int i) const { return pairs_.at(static_cast<std::size_t>(i)); }

  // Scaling s'y / y'y of the newest pair; 1 for an empty buffer.
  double gamma() const;

  void clear() { pairs_.clear(); }

 private:
  int memory_;
  std::deque<CorrectionPair> pairs_;
};

// Two-loop recursion: returns H g where H is the inverse-Hessian
// approximation implied by the buffer with H0 = gamma() I. An empty buffer
// returns g unchanged.
Eigen::VectorXd two_loop(const LbfgsBuffer& buf, const Eigen::VectorXd& g);

// H materialized column by column through two_loop, for spectrum
// diagnostics on small problems.
Eigen::MatrixXd dense_inverse_hessian(const LbfgsBuffer& buf, int dim);

struct WolfeConfig {
  double c1 = 1e-3;         // sufficient-decrease slope fraction
  double c2 = 1e-2;         // curvature tolerance (strong form)
  int max_evals = 20;       // objective evaluations before giving up
  double initial_step = 1.0;
  double fallback_step = 1e-2;
};

struct LineSearchResult {
  double alpha = 0.0;
  bool satisfied = false;  // both conditions hold at alpha
  bool descent = true;     // whether p was a descent direction at theta
  int evals = 0;
};

// Strong Wolfe search along p from theta on a fixed-batch objective;
// eval must return the objective value and gradient at its argument.
// Falls back to fallback_step (satisfied = false) when p is not a descent
// direction or the evaluation budget runs out.
LineSearchResult wolfe_line_search(
    const std::function<std::pair<double, Eigen::VectorXd>(
        const Eigen::VectorXd&)>& eval,
    const Eigen::VectorXd& theta, const Eigen::VectorXd& p, double f0,
    const Eigen::VectorXd& g0, const WolfeConfig& cfg);

}  // namespace qmcopt
