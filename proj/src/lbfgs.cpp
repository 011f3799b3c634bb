#include "qmcopt/lbfgs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmcopt {

LbfgsBuffer::LbfgsBuffer(int memory) : memory_(memory) {
  if (memory < 1) throw std::invalid_argument("LbfgsBuffer: memory must be >= 1");
}

bool LbfgsBuffer::insert(const Eigen::VectorXd& s, const Eigen::VectorXd& y) {
  if (s.size() != y.size())
    throw std::invalid_argument("LbfgsBuffer::insert: size mismatch");
  const double sy = s.dot(y);
  if (!(sy > kCurvatureEps * s.norm() * y.norm())) return false;
  if (size() == memory_) pairs_.pop_front();
  pairs_.push_back({s, y, 1.0 / sy});
  return true;
}

double LbfgsBuffer::gamma() const {
  if (pairs_.empty()) return 1.0;
  const CorrectionPair& newest = pairs_.back();
  return newest.s.dot(newest.y) / newest.y.squaredNorm();
}

Eigen::VectorXd two_loop(const LbfgsBuffer& buf, const Eigen::VectorXd& g) {
  const int m = buf.size();
  Eigen::VectorXd q = g;
  std::vector<double> alpha(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    const CorrectionPair& p = buf.pair(i);
    alpha[static_cast<std::size_t>(i)] = p.rho * p.s.dot(q);
    q -= alpha[static_cast<std::size_t>(i)] * p.y;
  }
  Eigen::VectorXd r = buf.gamma() * q;
  for (int i = 0; i < m; ++i) {
    const CorrectionPair& p = buf.pair(i);
    const double beta = p.rho * p.y.dot(r);
    r += (alpha[static_cast<std::size_t>(i)] - beta) * p.s;
  }
  return r;
}

Eigen::MatrixXd dense_inverse_hessian(const LbfgsBuffer& buf, int dim) {
  Eigen::MatrixXd H(dim, dim);
  for (int j = 0; j < dim; ++j)
    H.col(j) = two_loop(buf, Eigen::VectorXd::Unit(dim, j));
  return H;
}

namespace {

struct ZoomEnd {
  double alpha, phi;
};

}  // namespace

LineSearchResult wolfe_line_search(
    const std::function<std::pair<double, Eigen::VectorXd>(
        const Eigen::VectorXd&)>& eval,
    const Eigen::VectorXd& theta, const Eigen::VectorXd& p, double f0,
    const Eigen::VectorXd& g0, const WolfeConfig& cfg) {
  LineSearchResult out;
  out.alpha = cfg.fallback_step;
  const double dphi0 = g0.dot(p);
  if (!(dphi0 < 0.0)) {
    out.descent = false;
    return out;
  }
  const double phi0 = f0;
  auto probe = [&](double a, double& phi, double& dphi) {
    const auto [f, g] = eval(theta + a * p);
    ++out.evals;
    phi = f;
    dphi = g.dot(p);
  };
  auto armijo = [&](double a, double phi) {
    return phi <= phi0 + cfg.c1 * a * dphi0;
  };
  auto curvature_ok = [&](double dphi) {
    return std::abs(dphi) <= -cfg.c2 * dphi0;
  };

  // zoom phase: bisect a bracket [lo, hi] whose lo end satisfies Armijo
  auto zoom = [&](ZoomEnd lo, ZoomEnd hi) {
    while (out.evals < cfg.max_evals) {
      const double a = 0.5 * (lo.alpha + hi.alpha);
      double phi = 0.0, dphi = 0.0;
      probe(a, phi, dphi);
      if (!armijo(a, phi) || phi >= lo.phi) {
        hi = {a, phi};
        continue;
      }
      if (curvature_ok(dphi)) {
        out.alpha = a;
        out.satisfied = true;
        return;
      }
      if (dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = {a, phi};
    }
  };

  // bracketing phase
  double a_prev = 0.0, phi_prev = phi0, a = cfg.initial_step;
  bool first = true;
  while (out.evals < cfg.max_evals) {
    double phi = 0.0, dphi = 0.0;
    probe(a, phi, dphi);
    if (!armijo(a, phi) || (!first && phi >= phi_prev)) {
      zoom({a_prev, phi_prev}, {a, phi});
      return out;
    }
    if (curvature_ok(dphi)) {
      out.alpha = a;
      out.satisfied = true;
      return out;
    }
    if (dphi >= 0.0) {
      zoom({a, phi}, {a_prev, phi_prev});
      return out;
    }
    a_prev = a;
    phi_prev = phi;
    a *= 2.0;
    first = false;
  }
  return out;
}

}  // namespace qmcopt
