#include "report.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "toa/errors.hpp"

namespace toa::cli {

namespace {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void dump_json(const nlohmann::ordered_json& j, std::string& out) {
  using value_t = nlohmann::ordered_json::value_t;
  switch (j.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(key).dump();
        out += ':';
        dump_json(value, out);
      }
      out += '}';
      return;
    }
    case value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_json(j[i], out);
      }
      out += ']';
      return;
    }
    case value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) fail(ErrorKind::io, "cannot open " + path.string() +
                                        " for writing");
  stream << text;
  if (!stream) fail(ErrorKind::io, "write to " + path.string() + " failed");
}

std::string csv_preamble(const RunReport& report) {
  std::string out;
  out += "# toa " + report.version + "\n";
  out += "# scenario: " + report.scenario + "\n";
  out += "# config_hash: " + report.config_hash + "\n";
  out += "# kernel: " + report.kernel + "\n";
  return out;
}

std::filesystem::path ensure_dir(const std::string& output_dir) {
  std::filesystem::path dir(output_dir.empty() ? "." : output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    fail(ErrorKind::io, "cannot create output directory " + dir.string());
  return dir;
}

void flatten_results(const nlohmann::ordered_json& j, const std::string& prefix,
                     std::string& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten_results(value, name, out);
    } else if (value.is_number_float()) {
      out += name + "," + format_double(value.get<double>()) + "\n";
    } else if (value.is_null()) {
      out += name + ",\n";
    } else {
      out += name + "," + value.dump() + "\n";
    }
  }
}

}  // namespace

std::string config_hash(const std::string& config_text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : config_text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, hash);
  return buffer;
}

std::string report_to_json(const RunReport& report) {
  nlohmann::ordered_json doc;
  doc["meta"] = {{"version", report.version},
                 {"scenario", report.scenario},
                 {"config_hash", report.config_hash},
                 {"kernel", report.kernel},
                 {"threads", report.threads}};
  doc["config"] = report.config_echo;
  doc["results"] = report.results;
  doc["warnings"] = report.warnings;
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const auto& table : report.tables) {
    nlohmann::ordered_json t;
    t["columns"] = table.columns;
    t["rows"] = table.rows;
    tables[table.name] = std::move(t);
  }
  doc["tables"] = std::move(tables);
  doc["timings"] = {{"elapsed_seconds", report.elapsed_seconds}};
  std::string out;
  dump_json(doc, out);
  out += '\n';
  return out;
}

void emit(const RunReport& report, const std::string& format,
          const std::string& output_dir) {
  const auto dir = ensure_dir(output_dir);
  if (format == "json") {
    write_file(dir / "report.json", report_to_json(report));
    return;
  }
  if (format != "csv")
    fail(ErrorKind::invalid_parameter, "unknown format '" + format + "'");
  for (const auto& table : report.tables) {
    std::string out = csv_preamble(report);
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += format_double(row[c]);
      }
      out += '\n';
    }
    write_file(dir / (table.name + ".csv"), out);
  }
  std::string summary = csv_preamble(report);
  summary += "key,value\n";
  flatten_results(report.results, "", summary);
  for (const auto& warning : report.warnings)
    summary += "warning," + nlohmann::json(warning).dump() + "\n";
  write_file(dir / "summary.csv", summary);
}

void write_plot_script(const RunReport& report,
                       const std::string& output_dir) {
  const auto dir = ensure_dir(output_dir);
  std::string script =
      "#!/usr/bin/env python3\n"
      "# Plots the CSV tables produced by a toa run.\n"
      "import csv\n"
      "import matplotlib.pyplot as plt\n\n"
      "def load(path):\n"
      "    with open(path) as fh:\n"
      "        rows = [r for r in csv.reader(fh) if r and not "
      "r[0].startswith('#')]\n"
      "    header, data = rows[0], rows[1:]\n"
      "    cols = {name: [float(r[i]) for r in data] for i, name in "
      "enumerate(header)}\n"
      "    return cols\n\n";
  for (const auto& table : report.tables) {
    if (table.columns.size() < 2) continue;
    script += "data = load('" + table.name + ".csv')\n";
    script += "plt.figure()\n";
    for (size_t c = 1; c < table.columns.size(); ++c)
      script += "plt.plot(data['" + table.columns[0] + "'], data['" +
                table.columns[c] + "'], label='" + table.columns[c] + "')\n";
    script += "plt.xlabel('" + table.columns[0] + "')\n";
    script += "plt.legend()\n";
    script += "plt.title('" + report.scenario + ": " + table.name + "')\n";
    script += "plt.savefig('" + table.name + ".png', dpi=160)\n\n";
  }
  write_file(dir / "plot.py", script);
}

}  // namespace toa::cli
