#include "qmcopt/optimize.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace qmcopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct ErrOracle {
  bool available = false;
  Eigen::VectorXd theta_star;

  explicit ErrOracle(const VBProblem& model) {
    if (model.has_optimum()) {
      available = true;
      theta_star = model.optimum();
    }
  }
  double operator()(const Eigen::VectorXd& theta) const {
    return available ? (theta - theta_star).norm() : kNaN;
  }
};

void note_bounds(double lo, double hi, RunRecord& rec) {
  rec.h_lo = std::min(rec.h_lo, lo);
  rec.h_hi = std::max(rec.h_hi, hi);
}

}  // namespace

RunResult run_sqn(const VBProblem& model, const Eigen::VectorXd& theta0,
                  const SqnConfig& cfg, BatchSampler& grad_sampler,
                  BatchSampler& hess_sampler) {
  if (cfg.iterations < 1 || cfg.n_grad < 1 || cfg.n_hess < 1 ||
      cfg.interval < 1 || cfg.memory < 1)
    throw std::invalid_argument("run_sqn: sizes must be positive");
  if (theta0.size() != model.param_dim())
    throw std::invalid_argument("run_sqn: theta0 has wrong dimension");

  const int d = model.param_dim();
  RunResult res;
  res.theta = theta0;
  RunRecord& rec = res.record;
  rec.rows.reserve(static_cast<std::size_t>(cfg.iterations));
  rec.h_lo = std::numeric_limits<double>::infinity();
  rec.h_hi = 0.0;

  const ErrOracle err(model);
  WallClock clock;
  LbfgsBuffer buffer(cfg.memory);
  const bool can_measure = cfg.record_curvature_bounds && d <= 64;
  bool buffer_dirty = true;  // identity phase counts as a measurement below

  int epoch = -1;  // -1 and 0 are plain-gradient warm-up; pairs start at epoch 1
  Eigen::VectorXd theta_sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd avg_prev(d);
  bool warmed_identity = false;

  for (std::int64_t k = 1; k <= cfg.iterations; ++k) {
    SampleBatch batch = grad_sampler.draw(cfg.n_grad);
    batch.iteration = k;
    rec.grad_evals += cfg.n_grad;

    RunRow row;
    row.k = k;
    row.param_err = err(res.theta);

    Eigen::MatrixXd Z;
    double f = 0.0;
    Eigen::VectorXd g(d);
    try {
      Z = base_draws(model, batch);
      evaluate_batch(model, Z, res.theta, f, g);
    } catch (const NonFiniteError& e) {
      rec.aborted = true;
      rec.abort_reason = e.what();
      break;
    }
    row.elbo = -f;
    row.grad_norm = g.norm();

    theta_sum += res.theta;

    double step = cfg.alpha;
    if (epoch < 1) {
      // warm-up: plain stochastic gradient steps under the identity scaling
      step = cfg.warmup_alpha > 0.0 ? cfg.warmup_alpha : cfg.alpha;
      res.theta -= step * g;
      if (!warmed_identity) {
        warmed_identity = true;
        if (can_measure) note_bounds(1.0, 1.0, rec);
      }
    } else {
      const Eigen::VectorXd p = -two_loop(buffer, g);
      if (cfg.line_search) {
        auto eval = [&](const Eigen::VectorXd& th) {
          double fv = 0.0;
          Eigen::VectorXd gv(d);
          evaluate_batch(model, Z, th, fv, gv);
          return std::make_pair(fv, gv);
        };
        LineSearchResult ls;
        try {
          ls = wolfe_line_search(eval, res.theta, p, f, g, cfg.wolfe);
        } catch (const NonFiniteError&) {
          // objective blew up at a trial point: keep the fallback step
          ls.alpha = cfg.wolfe.fallback_step;
          ls.satisfied = false;
        }
        rec.grad_evals += static_cast<std::int64_t>(ls.evals) * cfg.n_grad;
        if (!ls.satisfied) ++rec.ls_fallbacks;
        step = ls.alpha;
      }
      res.theta += step * p;
    }
    row.step = step;

    if (!res.theta.allFinite()) {
      rec.aborted = true;
      rec.abort_reason = "non-finite iterate";
      rec.rows.push_back(row);
      rec.evals_at_row.push_back(rec.grad_evals);
      break;
    }

    if (k % cfg.interval == 0) {
      const Eigen::VectorXd avg = theta_sum / static_cast<double>(cfg.interval);
      theta_sum.setZero();
      ++epoch;
      if (epoch > 0) {
        const Eigen::VectorXd s = avg - avg_prev;
        SampleBatch hbatch = hess_sampler.draw(cfg.n_hess);
        hbatch.iteration = k;
        rec.grad_evals += 2 * static_cast<std::int64_t>(cfg.n_hess);
        ++rec.insert_attempts;
        bool accepted = false;
        try {
          const Eigen::VectorXd y =
              hessian_vector_product(model, hbatch, avg, s);
          accepted = buffer.insert(s, y);
        } catch (const NonFiniteError& e) {
          rec.aborted = true;
          rec.abort_reason = e.what();
          rec.rows.push_back(row);
          rec.evals_at_row.push_back(rec.grad_evals);
          break;
        }
        if (accepted) {
          ++rec.insert_accepts;
          buffer_dirty = true;
        }
      }
      avg_prev = avg;
    }

    // record the spectrum range of the scaling actually applied next step
    if (can_measure && buffer_dirty && epoch >= 1) {
      const Eigen::MatrixXd H = dense_inverse_hessian(buffer, d);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
      note_bounds(eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff(),
                  rec);
      buffer_dirty = false;
    }

    row.wall_ms = clock.ms();
    rec.rows.push_back(row);
    rec.evals_at_row.push_back(rec.grad_evals);
    if (cfg.on_iterate) cfg.on_iterate(k, res.theta);
  }

  if (!std::isfinite(rec.h_lo)) {
    rec.h_lo = kNaN;
    rec.h_hi = kNaN;
  }
  return res;
}

RunResult run_first_order(const VBProblem& model, const Eigen::VectorXd& theta0,
                          FirstOrderKind kind, const FirstOrderConfig& cfg,
                          BatchSampler& sampler) {
  if (cfg.iterations < 1 || cfg.n_grad < 1)
    throw std::invalid_argument("run_first_order: sizes must be positive");
  if (theta0.size() != model.param_dim())
    throw std::invalid_argument("run_first_order: theta0 has wrong dimension");

  const int d = model.param_dim();
  RunResult res;
  res.theta = theta0;
  RunRecord& rec = res.record;
  rec.rows.reserve(static_cast<std::size_t>(cfg.iterations));
  rec.h_lo = kNaN;
  rec.h_hi = kNaN;

  const ErrOracle err(model);
  WallClock clock;
  Eigen::ArrayXd accum = Eigen::ArrayXd::Zero(d);  // AdaGrad
  Eigen::ArrayXd m1 = Eigen::ArrayXd::Zero(d);     // Adam
  Eigen::ArrayXd m2 = Eigen::ArrayXd::Zero(d);

  for (std::int64_t k = 1; k <= cfg.iterations; ++k) {
    SampleBatch batch = sampler.draw(cfg.n_grad);
    batch.iteration = k;
    rec.grad_evals += cfg.n_grad;

    RunRow row;
    row.k = k;
    row.param_err = err(res.theta);

    GradientSample gs;
    try {
      gs = mean_gradient(model, batch, res.theta);
    } catch (const NonFiniteError& e) {
      rec.aborted = true;
      rec.abort_reason = e.what();
      break;
    }
    row.elbo = gs.elbo_estimate;
    row.grad_norm = gs.gradient.norm();
    const Eigen::ArrayXd g = gs.gradient.array();

    switch (kind) {
      case FirstOrderKind::Sgd:
        res.theta.array() -= cfg.lr * g;
        break;
      case FirstOrderKind::AdaGrad:
        accum += g.square();
        res.theta.array() -= cfg.lr * g / (accum.sqrt() + cfg.adagrad_eps);
        break;
      case FirstOrderKind::Adam: {
        m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * g;
        m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * g.square();
        const double b1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(k));
        const double b2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(k));
        res.theta.array() -=
            cfg.lr * (m1 / b1) / ((m2 / b2).sqrt() + cfg.adam_eps);
        break;
      }
    }
    row.step = cfg.lr;

    if (!res.theta.allFinite()) {
      rec.aborted = true;
      rec.abort_reason = "non-finite iterate";
      rec.rows.push_back(row);
      rec.evals_at_row.push_back(rec.grad_evals);
      break;
    }

    row.wall_ms = clock.ms();
    rec.rows.push_back(row);
    rec.evals_at_row.push_back(rec.grad_evals);
    if (cfg.on_iterate) cfg.on_iterate(k, res.theta);
  }
  return res;
}

}  // namespace qmcopt
