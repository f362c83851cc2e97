#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "toa/arrival_free.hpp"
#include "toa/barrier.hpp"
#include "toa/potential.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa::cli {

enum class Scenario { free1d, free3d, barrier, hartman_scan, wkb,
                      classical_oracle };

const char* scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& name);

// Raised by config parsing; carries the offending field names so the CLI can
// emit a machine-readable error object.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::vector<std::string> fields, const std::string& message)
      : std::runtime_error(message), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

struct ProfileSpec {
  double p0 = 0.0;
  double sigma_p = 0.0;
};

struct RunConfig {
  Scenario scenario = Scenario::free1d;
  UnitsConfig units;
  std::optional<MomentumWavePacket> packet;

  double x = 0.0;
  std::optional<TimeGrid> time_grid;
  std::vector<double> povm_T_half;

  // barrier / hartman-scan
  std::optional<SquareBarrier> barrier;
  double barrier_height = 0.0;
  std::vector<double> widths;

  // wkb / classical-oracle
  std::optional<SmoothPotential> potential;

  // free3d
  std::optional<ProfileSpec> profile;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::vector<std::array<double, 3>> probes;
  std::vector<double> t_half_ladder;

  // classical-oracle
  int samples = 10000;
  std::uint64_t seed = 0;
  double trajectory_step = 0.0;

  ArrivalOptions arrival;
  int threads = 0;

  nlohmann::ordered_json echo;  // parsed document, for the report
};

// Parses and validates a config document for the given scenario. Throws
// ValidationError listing every offending or missing field.
RunConfig parse_config(const std::string& json_text, Scenario scenario);

}  // namespace toa::cli
