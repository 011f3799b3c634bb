#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmcopt/estimators.hpp"
#include "qmcopt/lbfgs.hpp"
#include "qmcopt/models.hpp"
#include "qmcopt/sobol.hpp"

namespace qmcopt {

// One iteration of a run; matches the CSV column order.
struct RunRow {
  std::int64_t k = 0;
  double wall_ms = 0.0;
  double elbo = 0.0;       // batch ELBO estimate at theta_k
  double grad_norm = 0.0;  // ||mean gradient|| at theta_k
  double step = 0.0;       // step size used this iteration
  double param_err = 0.0;  // ||theta_k - theta*|| when known, else NaN
};

struct RunRecord {
  std::vector<RunRow> rows;
  // cumulative grad_evals after each recorded iteration (parallel to rows;
  // not serialized, used by evaluation-budget comparisons)
  std::vector<std::int64_t> evals_at_row;
  bool aborted = false;
  std::string abort_reason;
  std::int64_t grad_evals = 0;  // batch-size-weighted evaluation count
  int insert_attempts = 0;
  int insert_accepts = 0;
  int ls_fallbacks = 0;
  // extreme eigenvalues seen across all inverse-Hessian applications,
  // identity warm-up included; NaN when never measured
  double h_lo = 0.0;
  double h_hi = 0.0;
};

struct RunResult {
  Eigen::VectorXd theta;
  RunRecord record;
};

// Stochastic quasi-Newton with decoupled Hessian batches: plain gradient
// warm-up for the first two averaging intervals, then two-loop directions
// with an optional strong Wolfe search on each iteration's fixed batch.
// Every `interval` iterations the iterate average is refreshed and, from
// the second epoch on, a correction pair (s = difference of consecutive
// averages, y = mean Hessian-vector product on a fresh batch) is offered
// to the buffer.
struct SqnConfig {
  int iterations = 1000;
  int n_grad = 64;
  int n_hess = 512;
  int interval = 20;  // iterations per averaging epoch
  int memory = 50;
  double alpha = 0.001;  // fixed step when line search is off
  // plain-gradient warm-up step; 0 means reuse alpha. Stiff problems need
  // this far below 2/L while the later scaled steps tolerate much more.
  double warmup_alpha = 0.0;
  bool line_search = true;
  WolfeConfig wolfe;
  bool record_curvature_bounds = true;
  std::function<void(std::int64_t, const Eigen::VectorXd&)> on_iterate;
};

RunResult run_sqn(const VBProblem& model, const Eigen::VectorXd& theta0,
                  const SqnConfig& cfg, BatchSampler& grad_sampler,
                  BatchSampler& hess_sampler);

enum class FirstOrderKind { Sgd, AdaGrad, Adam };

struct FirstOrderConfig {
  int iterations = 1000;
  int n_grad = 64;
  double lr = 0.01;
  double adagrad_eps = 1e-10;  // added after the square root
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::function<void(std::int64_t, const Eigen::VectorXd&)> on_iterate;
};

RunResult run_first_order(const VBProblem& model, const Eigen::VectorXd& theta0,
                          FirstOrderKind kind, const FirstOrderConfig& cfg,
                          BatchSampler& sampler);

}  // namespace qmcopt
