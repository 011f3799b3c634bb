#include "qmcopt/runio.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qmcopt/seed.hpp"

namespace qmcopt {

namespace {

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& text,
                          const std::filesystem::path& path) {
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw std::runtime_error("bad CSV field '" + text + "' in " +
                             path.string());
  }
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  // unique temp name so concurrent writers to one directory cannot collide
  const std::filesystem::path tmp =
      path.parent_path() /
      (path.filename().string() + ".tmp." +
       std::to_string(splitmix64(
           reinterpret_cast<std::uintptr_t>(&text) ^
           static_cast<std::uint64_t>(
               std::chrono::steady_clock::now().time_since_epoch().count()))));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& rec) {
  std::ostringstream out;
  out << "k,wall_ms,elbo,grad_norm,step,param_err\n";
  for (const RunRow& r : rec.rows)
    out << r.k << ',' << format_full(r.wall_ms) << ',' << format_full(r.elbo)
        << ',' << format_full(r.grad_norm) << ',' << format_full(r.step) << ','
        << format_full(r.param_err) << '\n';
  if (rec.aborted) out << "# aborted: " << rec.abort_reason << '\n';
  atomic_write_text(path, out.str());
}

std::vector<RunRow> read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "k,wall_ms,elbo,grad_norm,step,param_err")
    throw std::runtime_error("bad CSV header in " + path.string());
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::string field;
    RunRow row;
    double* const slots[] = {nullptr,        &row.wall_ms, &row.elbo,
                             &row.grad_norm, &row.step,    &row.param_err};
    for (int i = 0; i < 6; ++i) {
      if (!std::getline(ls, field, ','))
        throw std::runtime_error("short CSV row in " + path.string());
      if (i == 0)
        row.k = static_cast<std::int64_t>(std::stoll(field));
      else
        *slots[i] = parse_double_field(field, path);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ostringstream out;
  emit_config(m.config, out);
  out << "\n[outputs]\n";
  for (const std::string& f : m.outputs) out << "file = " << f << "\n";
  atomic_write_text(path, out.str());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream config_part;
  Manifest m;
  std::string line;
  bool in_outputs = false;
  while (std::getline(in, line)) {
    if (line == "[outputs]") {
      in_outputs = true;
      continue;
    }
    if (!in_outputs) {
      config_part << line << '\n';
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto key = line.substr(0, eq);
    if (key.find("file") == std::string::npos)
      throw std::runtime_error("unexpected key in [outputs] of " +
                               path.string());
    auto value = line.substr(eq + 1);
    const auto b = value.find_first_not_of(" \t");
    m.outputs.push_back(b == std::string::npos ? "" : value.substr(b));
  }
  std::istringstream cfg_in(config_part.str());
  m.config = parse_config(cfg_in);
  return m;
}

}  // namespace qmcopt
