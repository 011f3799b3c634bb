#include "qmcopt/theorem.hpp"

#include <cmath>
#include <stdexcept>

namespace qmcopt {

namespace {

void check_constants(const CurvatureConstants& cc) {
  if (!(cc.c > 0.0) || !(cc.L >= cc.c))
    throw std::invalid_argument("bound check: need 0 < c <= L");
  if (!(cc.h1 > 0.0) || !(cc.h2 >= cc.h1))
    throw std::invalid_argument("bound check: need 0 < h1 <= h2");
  if (!(cc.alpha > 0.0))
    throw std::invalid_argument("bound check: need alpha > 0");
  if (!(cc.M >= 0.0))
    throw std::invalid_argument("bound check: need M >= 0");
}

}  // namespace

bool BoundReport::pass() const {
  if (!applicable) return true;
  for (const auto& p : points)
    if (!p.pass) return false;
  return true;
}

BoundReport expected_gap_bound_check(
    const CurvatureConstants& cc, double gap0,
    const std::vector<std::pair<std::int64_t, double>>& measured) {
  check_constants(cc);
  if (!(gap0 >= 0.0))
    throw std::invalid_argument("expected_gap_bound_check: gap0 must be >= 0");
  if (cc.alpha > cc.h1 / (cc.L * cc.h2 * cc.h2))
    throw std::invalid_argument(
        "expected_gap_bound_check: step size exceeds h1 / (L h2^2)");
  BoundReport rep;
  rep.contraction = 1.0 - cc.alpha * cc.c * cc.h1;
  rep.floor_term =
      cc.alpha * cc.L * cc.h2 * cc.h2 * cc.M / (2.0 * cc.c * cc.h1);
  for (const auto& [K, gap] : measured) {
    BoundPoint pt;
    pt.K = K;
    pt.measured = gap;
    pt.bound = std::pow(rep.contraction, static_cast<double>(K)) * gap0 +
               rep.floor_term;
    pt.pass = gap <= pt.bound;
    rep.points.push_back(pt);
  }
  return rep;
}

double gap_bound_hp_margin(const CurvatureConstants& cc, double grad_bound,
                           double eps) {
  check_constants(cc);
  return grad_bound * grad_bound *
         std::sqrt(2.0 * cc.alpha / (cc.c * cc.h1)) *
         (cc.h2 - cc.L * cc.alpha * cc.h1 * cc.h1 + cc.h1) * eps;
}

BoundReport iterate_distance_bound_check(
    const CurvatureConstants& cc, double dist0_sq,
    const std::vector<std::pair<std::int64_t, double>>& measured) {
  check_constants(cc);
  if (!(dist0_sq >= 0.0))
    throw std::invalid_argument(
        "iterate_distance_bound_check: dist0_sq must be >= 0");
  BoundReport rep;
  const double ratio = (cc.h2 - cc.h1) / (cc.h2 + cc.h1);
  if (cc.c / cc.L <= ratio) {
    rep.applicable = false;
    rep.note = "hypothesis c/L > (h2-h1)/(h2+h1) fails";
    return rep;
  }
  const double alpha_max = ((cc.h1 + cc.h2) * cc.c - (cc.h2 - cc.h1) * cc.L) /
                           (2.0 * cc.L * cc.L * cc.h2 * cc.h2);
  if (cc.alpha >= alpha_max) {
    rep.applicable = false;
    rep.note = "hypothesis alpha < ((h1+h2)c - (h2-h1)L)/(2 L^2 h2^2) fails";
    return rep;
  }
  rep.contraction = 1.0 - cc.alpha * cc.alpha * cc.h2 * cc.h2 * cc.L * cc.L;
  rep.floor_term = cc.M / (cc.L * cc.L);
  for (const auto& [K, dist_sq] : measured) {
    BoundPoint pt;
    pt.K = K;
    pt.measured = dist_sq;
    pt.bound = std::pow(rep.contraction, static_cast<double>(K)) * dist0_sq +
               rep.floor_term;
    pt.pass = dist_sq <= pt.bound;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace qmcopt
