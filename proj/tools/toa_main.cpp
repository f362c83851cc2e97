// Batch front end: one scenario per invocation, configured by a JSON
// document, emitting CSV/JSON results with provenance metadata.
//
// Exit codes: 0 success, 2 validation failure, 3 I/O failure, 4 numerical
// failure (unresolved quadrature, phase aliasing, truncated windows, ...).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "../src/cli/config.hpp"
#include "../src/cli/report.hpp"
#include "../src/cli/run.hpp"
#include "toa/errors.hpp"
#include "toa/numerics.hpp"
#include "toa/version.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

void print_error(const std::string& kind, const std::string& message,
                 const std::vector<std::string>& fields = {}) {
  nlohmann::ordered_json error;
  error["error"] = kind;
  if (!fields.empty()) error["fields"] = fields;
  error["message"] = message;
  std::cerr << error.dump() << "\n";
}

int exit_code_for(toa::ErrorKind kind) {
  switch (kind) {
    case toa::ErrorKind::invalid_parameter:
    case toa::ErrorKind::validation:
      return kExitValidation;
    case toa::ErrorKind::io:
      return kExitIo;
    default:
      return kExitNumerical;
  }
}

const char* error_kind_name(toa::ErrorKind kind) {
  switch (kind) {
    case toa::ErrorKind::invalid_parameter: return "invalid-parameter";
    case toa::ErrorKind::validation: return "validation";
    case toa::ErrorKind::resolution: return "resolution";
    case toa::ErrorKind::aliasing: return "aliasing";
    case toa::ErrorKind::bracket: return "bracket";
    case toa::ErrorKind::turning_point: return "turning-point";
    case toa::ErrorKind::domain: return "domain";
    case toa::ErrorKind::window_truncation: return "window-truncation";
    case toa::ErrorKind::degenerate_ensemble: return "degenerate-ensemble";
    case toa::ErrorKind::integration: return "integration";
    case toa::ErrorKind::io: return "io";
  }
  return "error";
}

struct ScenarioArgs {
  std::string config_path;
  std::string output_dir = ".";
  std::string format = "csv";
  int threads = 0;
  bool plot_script = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-of-arrival laboratory"};
  app.set_version_flag("--version", std::string("toa ") + toa::kVersion);
  app.require_subcommand(1);

  ScenarioArgs args;
  std::vector<std::pair<CLI::App*, toa::cli::Scenario>> subcommands;
  for (const auto scenario :
       {toa::cli::Scenario::free1d, toa::cli::Scenario::free3d,
        toa::cli::Scenario::barrier, toa::cli::Scenario::hartman_scan,
        toa::cli::Scenario::wkb, toa::cli::Scenario::classical_oracle}) {
    CLI::App* sub = app.add_subcommand(toa::cli::scenario_name(scenario));
    sub->add_option("--config", args.config_path, "run configuration (JSON)")
        ->required();
    sub->add_option("--output", args.output_dir, "output directory");
    sub->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", args.threads, "worker threads");
    sub->add_flag("--plot-script", args.plot_script,
                  "also write a matplotlib script");
    subcommands.emplace_back(sub, scenario);
  }

  CLI11_PARSE(app, argc, argv);

  toa::cli::Scenario scenario = toa::cli::Scenario::free1d;
  for (const auto& [sub, s] : subcommands)
    if (sub->parsed()) scenario = s;

  if (args.threads > 0) {
    toa::set_max_threads(args.threads);
  }  // else: TOA_THREADS environment variable, default 1

  std::string config_text;
  {
    std::ifstream stream(args.config_path, std::ios::binary);
    if (!stream) {
      print_error("io", "cannot read config file " + args.config_path);
      return kExitIo;
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    config_text = buffer.str();
  }

  try {
    toa::cli::RunConfig config =
        toa::cli::parse_config(config_text, scenario);
    config.threads = args.threads;
    toa::cli::RunReport report = toa::cli::run(config);
    report.config_hash = toa::cli::config_hash(config_text);
    toa::cli::emit(report, args.format, args.output_dir);
    if (args.plot_script)
      toa::cli::write_plot_script(report, args.output_dir);
    for (const auto& warning : report.warnings)
      std::cerr << "warning: " << warning << "\n";
    return 0;
  } catch (const toa::cli::ValidationError& e) {
    print_error("validation", e.what(), e.fields());
    return kExitValidation;
  } catch (const toa::Error& e) {
    print_error(error_kind_name(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitNumerical;
  }
}
