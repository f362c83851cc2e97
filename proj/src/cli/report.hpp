#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace toa::cli {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Everything a run produces: scalar results plus plot-ready tables, with
// enough metadata (version, config hash, kernel variant) to trace any number
// back to its configuration.
struct RunReport {
  std::string scenario;
  std::string version;
  std::string config_hash;
  std::string kernel;
  int threads = 1;
  nlohmann::ordered_json config_echo;
  nlohmann::ordered_json results;
  std::vector<std::string> warnings;
  std::vector<Table> tables;
  double elapsed_seconds = 0.0;
};

// FNV-1a over the raw config bytes, as a fixed-width hex string.
std::string config_hash(const std::string& config_text);

// Full report as a single JSON document. Doubles are written with 17
// significant digits; the document is byte-deterministic except for the
// "timings" object.
std::string report_to_json(const RunReport& report);

// report.json (json format) or per-table CSVs plus summary.csv (csv format)
// under the output directory. CSV dialect: comma-separated, '.' decimal,
// '#'-prefixed metadata preamble, LF endings.
void emit(const RunReport& report, const std::string& format,
          const std::string& output_dir);

// Companion matplotlib script referencing the emitted CSV files.
void write_plot_script(const RunReport& report, const std::string& output_dir);

}  // namespace toa::cli
