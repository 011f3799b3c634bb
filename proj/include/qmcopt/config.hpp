#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmcopt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sections mirror the INI-style config files:
//
//   [model]
//   kind = linreg          # linreg | logreg | crossed
//   ...
//
// parse_config and emit_config round-trip exactly.

struct ModelConfig {
  std::string kind = "linreg";
  int n_obs = 60;
  int dim = 20;
  int rows = 10;  // crossed effects grid
  int cols = 5;
  double gamma = 0.5;
  std::uint64_t data_seed = 1;

  bool operator==(const ModelConfig&) const = default;
};

struct SamplerConfig {
  std::string kind = "rqmc";        // rqmc | mc
  std::string scramble = "linear";  // linear | shift | none
  std::uint64_t seed = 1;

  bool operator==(const SamplerConfig&) const = default;
};

struct OptimizerConfig {
  std::string kind = "sqn";  // sqn | sgd | adagrad | adam
  int n_grad = 64;
  int n_hess = 512;
  int interval = 20;
  int memory = 50;
  double alpha = 0.001;
  double warmup_alpha = 0.0;  // 0 = use alpha
  double lr = 0.01;
  bool line_search = true;

  bool operator==(const OptimizerConfig&) const = default;
};

struct RunSection {
  int iterations = 1000;
  int reps = 1;
  std::vector<int> sweep;  // batch sizes; empty = single run at n_grad
  std::string out = "runs";

  bool operator==(const RunSection&) const = default;
};

struct ExperimentConfig {
  ModelConfig model;
  SamplerConfig sampler;
  OptimizerConfig optimizer;
  RunSection run;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::istream& in);
void emit_config(const ExperimentConfig& cfg, std::ostream& out);

// Comma-separated batch sizes, e.g. "8,16,32"; rejects junk.
std::vector<int> parse_sweep_list(const std::string& text);

}  // namespace qmcopt
