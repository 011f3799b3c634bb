#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmcopt/acceptance.hpp"
#include "qmcopt/config.hpp"
#include "qmcopt/experiment.hpp"
#include "qmcopt/runio.hpp"
#include "qmcopt/sobol.hpp"

namespace {

qmcopt::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw qmcopt::ConfigError("cannot open config file '" + path + "'");
  return qmcopt::parse_config(in);
}

int do_sample(int dim, int count, const std::string& kind,
              const std::string& scramble, std::uint64_t seed,
              const std::string& out) {
  qmcopt::SamplerConfig sc;
  sc.kind = kind;
  sc.scramble = scramble;
  sc.seed = seed;
  const auto sampler = qmcopt::make_sampler(sc, dim, seed);
  const qmcopt::SampleBatch batch = sampler->draw(count);

  std::ostringstream text;
  char buf[40];
  for (int i = 0; i < batch.n(); ++i) {
    for (int j = 0; j < batch.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", batch.points(i, j));
      text << (j ? "," : "") << buf;
    }
    text << '\n';
  }
  if (out.empty())
    std::cout << text.str();
  else
    qmcopt::atomic_write_text(out, text.str());
  return 0;
}

int do_experiment(const qmcopt::ExperimentConfig& cfg) {
  const qmcopt::ExperimentResult res = qmcopt::run_experiment(cfg);
  for (const qmcopt::RunSummary& s : res.runs)
    std::printf("n=%5d rep=%02d  elbo=%-12.6g err=%-12.4g evals=%-10lld %s%s\n",
                s.n, s.rep, s.final_elbo, s.final_err,
                static_cast<long long>(s.grad_evals), s.file.c_str(),
                s.aborted ? "  [aborted]" : "");
  if (res.rate)
    std::printf("error rate fit: slope=%.4f intercept=%.4f rms=%.4f\n",
                res.rate->slope, res.rate->intercept, res.rate->rms_residual);
  std::printf("manifest: %s\n", res.manifest.string().c_str());
  return 0;
}

int do_verify(const std::vector<int>& only, bool list) {
  if (list) {
    for (const auto& [id, name] : qmcopt::acceptance_criteria())
      std::printf("%02d  %s\n", id, name.c_str());
    return 0;
  }
  return qmcopt::run_acceptance(only, std::cout) == 0 ? 0 : 1;
}

// Adds the config-override options shared by `optimize` and `sweep`.
// Options write straight into cfg, so flags given on the command line
// take precedence over values loaded from --config.
void add_overrides(CLI::App* cmd, qmcopt::ExperimentConfig& cfg,
                   std::string& config_path, std::string& sweep_text) {
  cmd->add_option("--config", config_path, "INI config file");
  cmd->add_option("--model", cfg.model.kind, "linreg | logreg | crossed")
      ->check(CLI::IsMember({"linreg", "logreg", "crossed"}));
  cmd->add_option("--n-obs", cfg.model.n_obs, "observations (linreg, logreg)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dim", cfg.model.dim, "covariate dimension")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rows", cfg.model.rows, "crossed-effects rows")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cols", cfg.model.cols, "crossed-effects columns")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", cfg.model.gamma, "linreg noise scale")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--data-seed", cfg.model.data_seed, "dataset seed");
  cmd->add_option("--sampler", cfg.sampler.kind, "mc | rqmc")
      ->check(CLI::IsMember({"mc", "rqmc"}));
  cmd->add_option("--scramble", cfg.sampler.scramble,
                  "linear | shift | none (rqmc only)")
      ->check(CLI::IsMember({"linear", "shift", "none"}));
  cmd->add_option("--seed", cfg.sampler.seed, "sampler seed");
  cmd->add_option("--optimizer", cfg.optimizer.kind,
                  "sqn | sgd | adagrad | adam")
      ->check(CLI::IsMember({"sqn", "sgd", "adagrad", "adam"}));
  cmd->add_option("--n-grad", cfg.optimizer.n_grad, "gradient batch size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--n-hess", cfg.optimizer.n_hess,
                  "Hessian-vector batch size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--interval", cfg.optimizer.interval,
                  "iterations per averaging epoch")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--memory", cfg.optimizer.memory, "correction pairs kept")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", cfg.optimizer.alpha, "fixed step (sqn)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--warmup-alpha", cfg.optimizer.warmup_alpha,
                  "plain-gradient warm-up step (sqn, 0 = alpha)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--lr", cfg.optimizer.lr, "first-order learning rate")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--line-search,!--no-line-search", cfg.optimizer.line_search,
                "Wolfe search on each iteration's fixed batch (sqn)");
  cmd->add_option("--iters", cfg.run.iterations, "iterations per run")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--reps", cfg.run.reps, "replicates per batch size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sweep", sweep_text,
                  "comma-separated gradient batch sizes");
  cmd->add_option("--out", cfg.run.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized quasi-Monte Carlo stochastic optimization"};
  app.require_subcommand(1);

  // The config file must be loaded before CLI11 writes any override into
  // cfg, so pull its path out of argv ahead of the real parse.
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      config_path = arg.substr(9);
  }

  qmcopt::ExperimentConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path);
    } catch (const qmcopt::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    }
  }

  int dim = 2;
  int count = 16;
  std::string s_kind = "rqmc";
  std::string s_scramble = "linear";
  std::uint64_t s_seed = 1;
  std::string s_out;
  CLI::App* sample =
      app.add_subcommand("sample", "print a batch of sampler points as CSV");
  sample->add_option("--dim", dim, "point dimension")
      ->check(CLI::Range(1, 129));
  sample->add_option("--count", count, "number of points")
      ->check(CLI::PositiveNumber);
  sample->add_option("--sampler", s_kind, "mc | rqmc")
      ->check(CLI::IsMember({"mc", "rqmc"}));
  sample->add_option("--scramble", s_scramble, "linear | shift | none")
      ->check(CLI::IsMember({"linear", "shift", "none"}));
  sample->add_option("--seed", s_seed, "sampler seed");
  sample->add_option("--out", s_out, "write CSV here instead of stdout");

  std::string sweep_text;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "run the configured optimizer once per replicate "
                  "(any [run] sweep in the config is ignored)");
  add_overrides(optimize, cfg, config_path, sweep_text);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run the optimizer across a sweep of gradient batch sizes "
               "and fit the error-versus-size rate");
  add_overrides(sweep, cfg, config_path, sweep_text);

  std::vector<int> only;
  bool list_criteria = false;
  CLI::App* verify =
      app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--only", only, "criterion ids (default: all)")
      ->delimiter(',')
      ->check(CLI::Range(
          1, static_cast<int>(qmcopt::acceptance_criteria().size())));
  verify->add_flag("--list", list_criteria, "list criteria and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are config errors
  }

  try {
    if (*sample)
      return do_sample(dim, count, s_kind, s_scramble, s_seed, s_out);
    if (*optimize) {
      if (optimize->count("--sweep"))
        throw qmcopt::ConfigError(
            "--sweep only applies to the sweep subcommand");
      cfg.run.sweep.clear();
      return do_experiment(cfg);
    }
    if (*sweep) {
      if (sweep->count("--sweep"))
        cfg.run.sweep = qmcopt::parse_sweep_list(sweep_text);
      if (cfg.run.sweep.empty())
        throw qmcopt::ConfigError(
            "sweep needs batch sizes via --sweep or the config [run] sweep");
      return do_experiment(cfg);
    }
    if (*verify) return do_verify(only, list_criteria);
  } catch (const qmcopt::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
