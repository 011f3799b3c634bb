#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "qmcopt/config.hpp"
#include "qmcopt/models.hpp"
#include "qmcopt/optimize.hpp"
#include "qmcopt/rates.hpp"
#include "qmcopt/runio.hpp"

namespace qmcopt {

// Factories from config sections. Unknown kinds raise ConfigError.
std::unique_ptr<VBProblem> make_model(const ModelConfig& mc);
std::unique_ptr<BatchSampler> make_sampler(const SamplerConfig& sc, int dim,
                                           std::uint64_t seed);

// Median of a sample (by copy; the input order does not matter).
double median(std::vector<double> v);

struct RunSummary {
  int n = 0;    // gradient batch size of this run
  int rep = 0;  // replicate index
  std::string file;
  double final_elbo = 0.0;
  double final_err = 0.0;      // last-iterate parameter error, NaN without oracle
  double tail_log2_err = 0.0;  // mean log2 param_err over the last 50 rows
  std::int64_t grad_evals = 0;
  bool aborted = false;
};

struct ExperimentResult {
  std::vector<RunSummary> runs;
  // fitted error-vs-n rate over per-n medians, when a sweep of at least
  // three sizes ran on a problem with a parameter oracle
  std::optional<SlopeFit> rate;
  std::filesystem::path manifest;
};

// Runs the configured optimizer once per (replicate, batch size), writes
// one CSV per run plus a manifest naming them all, and returns summaries.
// Rerunning the same config reproduces every CSV except wall_ms.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Stable per-run seed stream tags (role 0 = gradient batches, 1 = Hessian).
std::uint64_t run_stream(int rep, int n, int role);

}  // namespace qmcopt
