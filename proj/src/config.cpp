#include "qmcopt/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace qmcopt {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, int line) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    fail(line, "cannot parse number '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text, int line) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  fail(line, "cannot parse boolean '" + text + "'");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<int> parse_sweep_list(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("sweep: empty entry in '" + text + "'");
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size() || v < 1)
      throw ConfigError("sweep: bad batch size '" + item + "'");
    out.push_back(v);
  }
  return out;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, int)>;
  const std::map<std::string, std::map<std::string, Setter>> sections = {
      {"model",
       {{"kind", [&](const std::string& v, int) { cfg.model.kind = v; }},
        {"n_obs", [&](const std::string& v, int l) { cfg.model.n_obs = parse_number<int>(v, l); }},
        {"dim", [&](const std::string& v, int l) { cfg.model.dim = parse_number<int>(v, l); }},
        {"rows", [&](const std::string& v, int l) { cfg.model.rows = parse_number<int>(v, l); }},
        {"cols", [&](const std::string& v, int l) { cfg.model.cols = parse_number<int>(v, l); }},
        {"gamma", [&](const std::string& v, int l) { cfg.model.gamma = parse_number<double>(v, l); }},
        {"data_seed", [&](const std::string& v, int l) { cfg.model.data_seed = parse_number<std::uint64_t>(v, l); }}}},
      {"sampler",
       {{"kind", [&](const std::string& v, int) { cfg.sampler.kind = v; }},
        {"scramble", [&](const std::string& v, int) { cfg.sampler.scramble = v; }},
        {"seed", [&](const std::string& v, int l) { cfg.sampler.seed = parse_number<std::uint64_t>(v, l); }}}},
      {"optimizer",
       {{"kind", [&](const std::string& v, int) { cfg.optimizer.kind = v; }},
        {"n_grad", [&](const std::string& v, int l) { cfg.optimizer.n_grad = parse_number<int>(v, l); }},
        {"n_hess", [&](const std::string& v, int l) { cfg.optimizer.n_hess = parse_number<int>(v, l); }},
        {"interval", [&](const std::string& v, int l) { cfg.optimizer.interval = parse_number<int>(v, l); }},
        {"memory", [&](const std::string& v, int l) { cfg.optimizer.memory = parse_number<int>(v, l); }},
        {"alpha", [&](const std::string& v, int l) { cfg.optimizer.alpha = parse_number<double>(v, l); }},
        {"warmup_alpha", [&](const std::string& v, int l) { cfg.optimizer.warmup_alpha = parse_number<double>(v, l); }},
        {"lr", [&](const std::string& v, int l) { cfg.optimizer.lr = parse_number<double>(v, l); }},
        {"line_search", [&](const std::string& v, int l) { cfg.optimizer.line_search = parse_bool(v, l); }}}},
      {"run",
       {{"iterations", [&](const std::string& v, int l) { cfg.run.iterations = parse_number<int>(v, l); }},
        {"reps", [&](const std::string& v, int l) { cfg.run.reps = parse_number<int>(v, l); }},
        {"sweep", [&](const std::string& v, int) { cfg.run.sweep = parse_sweep_list(v); }},
        {"out", [&](const std::string& v, int) { cfg.run.out = v; }}}}};

  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) fail(lineno, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    if (section.empty()) fail(lineno, "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = sections.at(section);
    const auto it = keys.find(key);
    if (it == keys.end())
      fail(lineno, "unknown key '" + key + "' in section [" + section + "]");
    try {
      it->second(value, lineno);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(lineno, e.what());
    }
  }
  return cfg;
}

void emit_config(const ExperimentConfig& cfg, std::ostream& out) {
  out << "[model]\n"
      << "kind = " << cfg.model.kind << "\n"
      << "n_obs = " << cfg.model.n_obs << "\n"
      << "dim = " << cfg.model.dim << "\n"
      << "rows = " << cfg.model.rows << "\n"
      << "cols = " << cfg.model.cols << "\n"
      << "gamma = " << format_double(cfg.model.gamma) << "\n"
      << "data_seed = " << cfg.model.data_seed << "\n\n";
  out << "[sampler]\n"
      << "kind = " << cfg.sampler.kind << "\n"
      << "scramble = " << cfg.sampler.scramble << "\n"
      << "seed = " << cfg.sampler.seed << "\n\n";
  out << "[optimizer]\n"
      << "kind = " << cfg.optimizer.kind << "\n"
      << "n_grad = " << cfg.optimizer.n_grad << "\n"
      << "n_hess = " << cfg.optimizer.n_hess << "\n"
      << "interval = " << cfg.optimizer.interval << "\n"
      << "memory = " << cfg.optimizer.memory << "\n"
      << "alpha = " << format_double(cfg.optimizer.alpha) << "\n"
      << "warmup_alpha = " << format_double(cfg.optimizer.warmup_alpha) << "\n"
      << "lr = " << format_double(cfg.optimizer.lr) << "\n"
      << "line_search = " << (cfg.optimizer.line_search ? "true" : "false")
      << "\n\n";
  out << "[run]\n"
      << "iterations = " << cfg.run.iterations << "\n"
      << "reps = " << cfg.run.reps << "\n";
  if (!cfg.run.sweep.empty()) {
    out << "sweep = ";
    for (std::size_t i = 0; i < cfg.run.sweep.size(); ++i)
      out << (i ? "," : "") << cfg.run.sweep[i];
    out << "\n";
  }
  out << "out = " << cfg.run.out << "\n";
}

}  // namespace qmcopt
