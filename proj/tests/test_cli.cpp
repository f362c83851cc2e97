#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "toa/arrival_free.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

TEST_SUITE_BEGIN("cli");

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string stderr_text;
};

std::string read_file(const fs::path& path) {
  std::ifstream stream(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream stream(path, std::ios::binary);
  stream << text;
}

const char* toa_binary() { return std::getenv("TOA_BIN"); }

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("toa_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CommandResult run_toa(const std::string& arguments, const fs::path& dir) {
  CommandResult result;
  const fs::path err = dir / "stderr.txt";
  const std::string command = std::string(toa_binary()) + " " + arguments +
                              " 2>" + err.string() + " >/dev/null";
  const int status = std::system(command.c_str());
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.stderr_text = read_file(err);
  return result;
}

const std::string kFreeConfig = R"({
  "scenario": "free1d",
  "packet": {"kind": "gaussian", "q0": -10.0, "p0": 2.0, "sigma_p": 0.1},
  "x": 0.0
})";

// Strips the timings object, the only part allowed to differ between runs.
std::string without_timings(std::string text) {
  const auto pos = text.find("\"timings\"");
  REQUIRE(pos != std::string::npos);
  const auto end = text.find('}', pos);
  return text.erase(pos, end - pos + 1);
}

}  // namespace

TEST_CASE("missing x fails validation naming the field") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("missing_x");
  write_file(dir / "config.json", R"({
    "scenario": "free1d",
    "packet": {"kind": "gaussian", "q0": -10.0, "p0": 2.0, "sigma_p": 0.1}
  })");
  const auto result = run_toa(
      "free1d --config " + (dir / "config.json").string() + " --output " +
          dir.string(),
      dir);
  CHECK(result.exit_code == 2);
  const auto error = json::parse(result.stderr_text);
  CHECK(error["error"] == "validation");
  REQUIRE(error.contains("fields"));
  bool names_x = false;
  for (const auto& f : error["fields"]) names_x |= (f == "x");
  CHECK(names_x);
}

TEST_CASE("malformed JSON fails validation") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("bad_json");
  write_file(dir / "config.json", "{ not json");
  const auto result = run_toa(
      "free1d --config " + (dir / "config.json").string(), dir);
  CHECK(result.exit_code == 2);
}

TEST_CASE("unwritable output path exits with the io code") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("unwritable");
  write_file(dir / "config.json", kFreeConfig);
  write_file(dir / "blocker", "");  // a regular file where the dir should go
  const auto result = run_toa(
      "free1d --config " + (dir / "config.json").string() + " --output " +
          (dir / "blocker").string(),
      dir);
  CHECK(result.exit_code == 3);
}

TEST_CASE("free1d emits the distribution CSV and a matching summary") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("free1d_csv");
  write_file(dir / "config.json", kFreeConfig);
  const auto result = run_toa(
      "free1d --config " + (dir / "config.json").string() + " --output " +
          dir.string() + " --format csv",
      dir);
  REQUIRE(result.exit_code == 0);

  const std::string csv = read_file(dir / "distribution.csv");
  CHECK(csv.find("# toa ") == 0);
  CHECK(csv.find("t,density\n") != std::string::npos);
  CHECK(csv.find("\r") == std::string::npos);  // LF endings only

  const std::string summary = read_file(dir / "summary.csv");
  const auto pos = summary.find("mean_time,");
  REQUIRE(pos != std::string::npos);
  const double mean = std::stod(summary.substr(pos + 10));
  const auto packet = toa::gaussian_packet(-10.0, 2.0, 0.1);
  const double expected =
      toa::mean_arrival_time(packet, 0.0, toa::UnitsConfig{});
  CHECK(mean == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("json report round-trips and mirrors the library") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("free1d_json");
  write_file(dir / "config.json", kFreeConfig);
  const auto result = run_toa(
      "free1d --config " + (dir / "config.json").string() + " --output " +
          dir.string() + " --format json",
      dir);
  REQUIRE(result.exit_code == 0);
  const auto report = json::parse(read_file(dir / "report.json"));
  CHECK(report["meta"]["scenario"] == "free1d");
  CHECK(report["config"]["packet"]["p0"] == 2.0);
  CHECK(report["results"]["arrival_probability"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-3));
  // Round-trip: 17 significant digits reparse to the exact double.
  const auto packet = toa::gaussian_packet(-10.0, 2.0, 0.1);
  const double expected =
      toa::mean_arrival_time(packet, 0.0, toa::UnitsConfig{});
  CHECK(report["results"]["mean_time"].get<double>() == expected);
}

TEST_CASE("identical configs produce identical reports modulo timings") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir_a = fresh_dir("determinism_a");
  const auto dir_b = fresh_dir("determinism_b");
  for (const auto& dir : {dir_a, dir_b}) {
    write_file(dir / "config.json", kFreeConfig);
    const auto result = run_toa(
        "free1d --config " + (dir / "config.json").string() + " --output " +
            dir.string() + " --format json",
        dir);
    REQUIRE(result.exit_code == 0);
  }
  CHECK(without_timings(read_file(dir_a / "report.json")) ==
        without_timings(read_file(dir_b / "report.json")));
}

TEST_CASE("hartman scan reports the crossover bracket") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("hartman");
  write_file(dir / "config.json", R"({
    "scenario": "hartman-scan",
    "packet": {"kind": "gaussian", "q0": -30.0, "p0": 0.5, "sigma_p": 0.1},
    "height": 0.5,
    "widths": [3.0, 6.0, 12.0, 17.0],
    "x": 40.0
  })");
  const auto result = run_toa(
      "hartman-scan --config " + (dir / "config.json").string() +
          " --output " + dir.string() + " --format json",
      dir);
  REQUIRE(result.exit_code == 0);
  const auto report = json::parse(read_file(dir / "report.json"));
  CHECK(report["results"]["sign_changes"] == 1);
  CHECK(report["results"]["crossover_bracket"]["lo"].get<double>() == 12.0);
  CHECK(report["results"]["crossover_bracket"]["hi"].get<double>() == 17.0);
  CHECK(report["tables"]["scan"]["rows"].size() == 4);
}

TEST_CASE("numerical failures exit with code 4") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("truncated");
  // A window far too short for the packet: the density is cut off.
  write_file(dir / "config.json", R"({
    "scenario": "free1d",
    "packet": {"kind": "gaussian", "q0": -10.0, "p0": 2.0, "sigma_p": 0.1},
    "x": 0.0,
    "time_grid": {"t_min": 4.9, "t_max": 5.1, "count": 64}
  })");
  const auto result = run_toa(
      "free1d --config " + (dir / "config.json").string() + " --output " +
          dir.string(),
      dir);
  CHECK(result.exit_code == 4);
  CHECK(json::parse(result.stderr_text)["error"] == "window-truncation");
}

TEST_CASE("TOA_KERNEL=scalar forces the reference kernel") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("kernel_env");
  write_file(dir / "config.json", kFreeConfig);
  const fs::path err = dir / "stderr.txt";
  const std::string command =
      "TOA_KERNEL=scalar " + std::string(toa_binary()) + " free1d --config " +
      (dir / "config.json").string() + " --output " + dir.string() +
      " --format json 2>" + err.string() + " >/dev/null";
  REQUIRE(std::system(command.c_str()) == 0);
  const auto report = json::parse(read_file(dir / "report.json"));
  CHECK(report["meta"]["kernel"] == "scalar");
}

TEST_CASE("barrier scenario rejects a detector inside the barrier") {
  REQUIRE(toa_binary() != nullptr);
  const auto dir = fresh_dir("barrier_geom");
  write_file(dir / "config.json", R"({
    "scenario": "barrier",
    "packet": {"kind": "gaussian", "q0": -30.0, "p0": 0.5, "sigma_p": 0.1},
    "barrier": {"height": 0.5, "width": 3.0, "start": 0.0},
    "x": 2.0
  })");
  const auto result = run_toa(
      "barrier --config " + (dir / "config.json").string(), dir);
  CHECK(result.exit_code == 2);
  const auto error = json::parse(result.stderr_text);
  bool names_x = false;
  for (const auto& f : error["fields"]) names_x |= (f == "x");
  CHECK(names_x);
}

TEST_SUITE_END();
