// matern-lab: batch front end. Each subcommand reads a JSON config, fills
// in defaults, and writes one CSV (JSON for `fit`) artifact.
//
// Exit codes: 0 success, 2 configuration or validation error, 3 numerical
// failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"
#include "maternlab/csv.hpp"
#include "maternlab/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config_path;
  std::string output_path;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  int verbosity = 0;
  bool quiet = false;
  bool dry_run = false;
};

int report(int code, const std::vector<std::string>& lines) {
  for (const auto& l : lines) std::cerr << "matern-lab: error: " << l << '\n';
  return code;
}

int run(const matern_lab::Command& cmd, const Options& opt) {
  using matern_lab::json;
  const json user = opt.config_path.empty() ? json::object() : matern_lab::read_json_file(opt.config_path);
  const json resolved = matern_lab::resolve_config(cmd.defaults, user);
  const std::string canonical = matern_lab::canonical_config(cmd.name, opt.seed, resolved);
  const std::string hash = maternlab::csv::hash_hex(canonical);
  const std::size_t threads = opt.threads == 0 ? maternlab::hardware_threads() : opt.threads;

  if (opt.dry_run) {
    std::cout << "subcommand: " << cmd.name << "\nseed: " << opt.seed << "\nthreads: " << threads
              << "\nconfig-hash: " << hash << "\nresolved config:\n"
              << resolved.dump(2) << "\nestimated matrix sizes:\n";
    for (const auto& line : cmd.sizes(resolved)) std::cout << "  " << line << '\n';
    return 0;
  }

  maternlab::ThreadPool pool(threads);
  matern_lab::RunContext ctx{opt.seed, &pool, maternlab::csv::header_comment(cmd.name, canonical), hash};
  const auto t0 = std::chrono::steady_clock::now();
  const std::string artifact = cmd.run(resolved, ctx);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (opt.output_path.empty() || opt.output_path == "-") {
    std::cout << artifact << std::flush;
  } else {
    std::ofstream out(opt.output_path, std::ios::binary);
    if (!out) throw matern_lab::ConfigError({"cannot write '" + opt.output_path + "'"});
    out << artifact;
  }
  if (opt.verbosity > 0 && !opt.quiet) {
    std::fprintf(stderr, "matern-lab: %s finished in %.2f s on %zu thread(s)\n", cmd.name.c_str(),
                 secs, threads);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matern-lab: covariance kernels, Gaussian process experiments and table reproduction"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("-c,--config", opt.config_path, "JSON config file (defaults apply to missing keys)");
  app.add_option("-o,--output", opt.output_path, "Output file; stdout when omitted or '-'");
  app.add_option("--seed", opt.seed, "Root seed for all randomness")->capture_default_str();
  app.add_option("--threads", opt.threads, "Worker threads (0: all hardware threads)")
      ->capture_default_str();
  app.add_flag("-v,--verbose", opt.verbosity, "Report timing on stderr");
  app.add_flag("-q,--quiet", opt.quiet, "Suppress non-error messages");
  app.add_flag("--dry-run", opt.dry_run, "Print the resolved config and matrix sizes, then exit");

  const matern_lab::Command* selected = nullptr;
  for (const auto& cmd : matern_lab::commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.summary);
    sub->fallthrough();
    sub->callback([&selected, &cmd] { selected = &cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return run(*selected, opt);
  } catch (const matern_lab::ConfigError& e) {
    return report(kExitConfig, e.violations());
  } catch (const maternlab::ValidationError& e) {
    return report(kExitConfig, e.violations());
  } catch (const nlohmann::json::exception& e) {
    return report(kExitConfig, {std::string("config: ") + e.what()});
  } catch (const maternlab::DomainError& e) {
    return report(kExitConfig, {e.what()});
  } catch (const maternlab::ShapeMismatch& e) {
    return report(kExitConfig, {e.what()});
  } catch (const maternlab::DimensionOutOfRange& e) {
    return report(kExitConfig, {e.what()});
  } catch (const maternlab::UnsupportedFamily& e) {
    return report(kExitConfig, {e.what()});
  } catch (const maternlab::UnsupportedPair& e) {
    return report(kExitConfig, {e.what()});
  } catch (const maternlab::NoFreeParameters& e) {
    return report(kExitConfig, {e.what()});
  } catch (const maternlab::EmptyNearSet& e) {
    return report(kExitConfig, {e.what()});
  } catch (const maternlab::Error& e) {
    return report(kExitNumerical, {e.what()});
  } catch (const std::exception& e) {
    return report(kExitNumerical, {e.what()});
  }
}
