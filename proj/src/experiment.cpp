#include "qmcopt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "qmcopt/seed.hpp"

namespace qmcopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Randomize scramble_mode(const std::string& name) {
  if (name == "linear") return Randomize::LinearScramble;
  if (name == "shift") return Randomize::DigitalShift;
  if (name == "none") return Randomize::None;
  throw ConfigError("unknown scramble mode '" + name + "'");
}

std::string run_file_name(const ExperimentConfig& cfg, int n, int rep) {
  std::ostringstream name;
  name << cfg.optimizer.kind << '_' << cfg.sampler.kind << "_n";
  name.width(5);
  name.fill('0');
  name << n;
  name << "_rep";
  name.width(2);
  name.fill('0');
  name << rep;
  name << ".csv";
  return name.str();
}

double tail_mean_log2_err(const RunRecord& rec, int window) {
  const int rows = static_cast<int>(rec.rows.size());
  if (rows == 0) return kNaN;
  const int take = std::min(window, rows);
  double sum = 0.0;
  for (int i = rows - take; i < rows; ++i) {
    const double e = rec.rows[static_cast<std::size_t>(i)].param_err;
    if (!(e > 0.0)) return kNaN;
    sum += std::log2(e);
  }
  return sum / take;
}

}  // namespace

std::uint64_t run_stream(int rep, int n, int role) {
  return (static_cast<std::uint64_t>(rep) << 34) ^
         (static_cast<std::uint64_t>(n) << 2) ^
         static_cast<std::uint64_t>(role);
}

std::unique_ptr<VBProblem> make_model(const ModelConfig& mc) {
  if (mc.kind == "linreg")
    return std::make_unique<LinRegModel>(
        make_linreg_data(mc.n_obs, mc.dim, mc.gamma, mc.data_seed));
  if (mc.kind == "logreg")
    return std::make_unique<LogRegModel>(
        make_logreg_data(mc.n_obs, mc.dim, mc.data_seed));
  if (mc.kind == "crossed")
    return std::make_unique<CrossedModel>(
        make_crossed_data(mc.rows, mc.cols, mc.data_seed));
  throw ConfigError("unknown model kind '" + mc.kind + "'");
}

std::unique_ptr<BatchSampler> make_sampler(const SamplerConfig& sc, int dim,
                                           std::uint64_t seed) {
  if (sc.kind == "mc") return std::make_unique<McSampler>(dim, seed);
  if (sc.kind == "rqmc")
    return std::make_unique<SobolSampler>(dim, scramble_mode(sc.scramble),
                                          seed);
  throw ConfigError("unknown sampler kind '" + sc.kind + "'");
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto model = make_model(cfg.model);
  std::vector<int> sizes = cfg.run.sweep;
  if (sizes.empty()) sizes.push_back(cfg.optimizer.n_grad);
  if (cfg.run.reps < 1) throw ConfigError("run.reps must be >= 1");

  const std::filesystem::path out_dir(cfg.run.out);
  std::filesystem::create_directories(out_dir);

  ExperimentResult result;
  Manifest manifest;
  manifest.config = cfg;

  for (int rep = 0; rep < cfg.run.reps; ++rep) {
    for (const int n : sizes) {
      auto grad_sampler = make_sampler(
          cfg.sampler, model->sample_dim(),
          derive_seed(cfg.sampler.seed, run_stream(rep, n, 0)));
      RunResult run;
      if (cfg.optimizer.kind == "sqn") {
        auto hess_sampler = make_sampler(
            cfg.sampler, model->sample_dim(),
            derive_seed(cfg.sampler.seed, run_stream(rep, n, 1)));
        SqnConfig sc;
        sc.iterations = cfg.run.iterations;
        sc.n_grad = n;
        sc.n_hess = cfg.optimizer.n_hess;
        sc.interval = cfg.optimizer.interval;
        sc.memory = cfg.optimizer.memory;
        sc.alpha = cfg.optimizer.alpha;
        sc.warmup_alpha = cfg.optimizer.warmup_alpha;
        sc.line_search = cfg.optimizer.line_search;
        run = run_sqn(*model, model->init_theta(), sc, *grad_sampler,
                      *hess_sampler);
      } else {
        FirstOrderKind kind;
        if (cfg.optimizer.kind == "sgd")
          kind = FirstOrderKind::Sgd;
        else if (cfg.optimizer.kind == "adagrad")
          kind = FirstOrderKind::AdaGrad;
        else if (cfg.optimizer.kind == "adam")
          kind = FirstOrderKind::Adam;
        else
          throw ConfigError("unknown optimizer kind '" + cfg.optimizer.kind +
                            "'");
        FirstOrderConfig fc;
        fc.iterations = cfg.run.iterations;
        fc.n_grad = n;
        fc.lr = cfg.optimizer.lr;
        run = run_first_order(*model, model->init_theta(), kind, fc,
                              *grad_sampler);
      }

      RunSummary summary;
      summary.n = n;
      summary.rep = rep;
      summary.file = run_file_name(cfg, n, rep);
      summary.grad_evals = run.record.grad_evals;
      summary.aborted = run.record.aborted;
      if (!run.record.rows.empty()) {
        summary.final_elbo = run.record.rows.back().elbo;
        summary.final_err = run.record.rows.back().param_err;
      } else {
        summary.final_elbo = kNaN;
        summary.final_err = kNaN;
      }
      summary.tail_log2_err = tail_mean_log2_err(run.record, 50);
      write_run_csv(out_dir / summary.file, run.record);
      manifest.outputs.push_back(summary.file);
      result.runs.push_back(std::move(summary));
    }
  }

  // error-versus-batch-size rate over per-size medians of the tail error
  if (sizes.size() >= 3) {
    std::map<int, std::vector<double>> per_size;
    for (const RunSummary& s : result.runs)
      if (!s.aborted && std::isfinite(s.tail_log2_err))
        per_size[s.n].push_back(s.tail_log2_err);
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, errs] : per_size)
      if (!errs.empty())
        pts.emplace_back(static_cast<double>(n),
                         std::exp2(median(errs)));
    if (pts.size() >= 3) result.rate = fit_rate(pts);
  }

  result.manifest = out_dir / "manifest.txt";
  write_manifest(result.manifest, manifest);
  return result;
}

}  // namespace qmcopt
