#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qmcopt {

// Curvature and noise constants entering the convergence guarantees:
// c, L bound the objective Hessian, h1, h2 bound the spectrum of every
// inverse-Hessian scaling the run applied (identity warm-up included),
// M bounds the mean-gradient variance trace, alpha is the fixed step.
struct CurvatureConstants {
  double c = 0.0;
  double L = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double M = 0.0;
  double alpha = 0.0;
};

struct BoundPoint {
  std::int64_t K = 0;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct BoundReport {
  bool applicable = true;
  std::string note;
  double contraction = 0.0;  // per-step geometric factor
  double floor_term = 0.0;   // additive noise floor
  std::vector<BoundPoint> points;

  // vacuously true when the hypotheses exclude the setup
  bool pass() const;
};

// Checks measured mean objective gaps E[F(theta_K) - F*] against
//   (1 - alpha c h1)^K gap0 + alpha L h2^2 M / (2 c h1).
// Requires alpha <= h1 / (L h2^2); throws std::invalid_argument otherwise,
// since running outside the guarantee is a configuration error.
BoundReport expected_gap_bound_check(
    const CurvatureConstants& cc, double gap0,
    const std::vector<std::pair<std::int64_t, double>>& measured);

// Margin added to the expected-gap bound that holds with probability at
// least 1 - exp(-eps^2), where grad_bound is an almost-sure bound on the
// per-batch gradient norm: C^2 sqrt(2 alpha / (c h1)) (h2 - L alpha h1^2 + h1) eps.
double gap_bound_hp_margin(const CurvatureConstants& cc, double grad_bound,
                           double eps);

// Checks measured mean squared distances E||theta_K - theta*||^2 against
//   (1 - alpha^2 h2^2 L^2)^K dist0_sq + M / L^2.
// The guarantee only covers c/L > (h2 - h1)/(h2 + h1) together with
// alpha < ((h1 + h2) c - (h2 - h1) L) / (2 L^2 h2^2); when violated the
// report comes back applicable = false rather than failed.
BoundReport iterate_distance_bound_check(
    const CurvatureConstants& cc, double dist0_sq,
    const std::vector<std::pair<std::int64_t, double>>& measured);

}  // namespace qmcopt
