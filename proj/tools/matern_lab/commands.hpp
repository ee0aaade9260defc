#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "maternlab/parallel.hpp"

namespace matern_lab {

struct RunContext {
  std::uint64_t seed = 0;
  maternlab::Executor* exec = nullptr;
  /// Header comment line for CSV artifacts (carries the config hash).
  std::string header;
  std::string config_hash;
};

struct Command {
  std::string name;
  std::string summary;
  json defaults;
  /// Computes the artifact text (CSV or JSON).
  std::function<std::string(const json& cfg, const RunContext& ctx)> run;
  /// Dry-run estimate: one line per dense matrix the run would build.
  std::function<std::vector<std::string>(const json& cfg)> sizes;
};

const std::vector<Command>& commands();

/// Canonical text hashed into the CSV header: subcommand, seed and the
/// resolved config (thread count excluded), plus digests of input files.
std::string canonical_config(const std::string& name, std::uint64_t seed, const json& resolved);

}  // namespace matern_lab
