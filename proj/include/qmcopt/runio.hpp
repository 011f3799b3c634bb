#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qmcopt/config.hpp"
#include "qmcopt/optimize.hpp"

namespace qmcopt {

// All writes go through a temp file in the target directory followed by a
// rename, so readers never observe partial files.
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& text);

// Fixed schema: header "k,wall_ms,elbo,grad_norm,step,param_err", one row
// per iteration, doubles at full precision. An aborted run gains a trailing
// comment line "# aborted: <reason>".
void write_run_csv(const std::filesystem::path& path, const RunRecord& rec);
std::vector<RunRow> read_run_csv(const std::filesystem::path& path);

struct Manifest {
  ExperimentConfig config;
  std::vector<std::string> outputs;  // file names relative to the manifest

  bool operator==(const Manifest&) const = default;
};

void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace qmcopt
