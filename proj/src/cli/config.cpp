#include "config.hpp"

#include <algorithm>

namespace toa::cli {

namespace {

using nlohmann::ordered_json;

class FieldCollector {
 public:
  void missing(const std::string& field) { add(field, "missing"); }
  void invalid(const std::string& field, const std::string& why) {
    add(field, why);
  }
  bool ok() const { return fields_.empty(); }
  [[noreturn]] void raise() const {
    throw ValidationError(fields_, message_);
  }
  void check() const {
    if (!ok()) raise();
  }

 private:
  void add(const std::string& field, const std::string& why) {
    fields_.push_back(field);
    if (!message_.empty()) message_ += "; ";
    message_ += field + ": " + why;
  }
  std::vector<std::string> fields_;
  std::string message_;
};

double require_number(const ordered_json& j, const std::string& key,
                      FieldCollector& errors, double fallback = 0.0) {
  if (!j.contains(key)) {
    errors.missing(key);
    return fallback;
  }
  if (!j[key].is_number()) {
    errors.invalid(key, "must be a number");
    return fallback;
  }
  return j[key].get<double>();
}

std::optional<MomentumWavePacket> parse_packet(const ordered_json& root,
                                               FieldCollector& errors) {
  if (!root.contains("packet")) {
    errors.missing("packet");
    return std::nullopt;
  }
  const auto& j = root["packet"];
  const std::string kind = j.value("kind", "gaussian");
  if (kind == "gaussian") {
    const double q0 = require_number(j, "q0", errors);
    const double p0 = require_number(j, "p0", errors);
    const double sigma = require_number(j, "sigma_p", errors);
    if (!errors.ok()) return std::nullopt;
    if (!(sigma > 0.0)) {
      errors.invalid("packet.sigma_p", "must be > 0");
      return std::nullopt;
    }
    return gaussian_packet(q0, p0, sigma);
  }
  if (kind == "tabulated") {
    if (!j.contains("p") || !j.contains("re") || !j.contains("im")) {
      errors.invalid("packet", "tabulated packets need p, re, im arrays");
      return std::nullopt;
    }
    const auto p = j["p"].get<std::vector<double>>();
    const auto re = j["re"].get<std::vector<double>>();
    const auto im = j["im"].get<std::vector<double>>();
    if (p.size() != re.size() || p.size() != im.size() || p.size() < 2) {
      errors.invalid("packet", "p, re, im must have equal length >= 2");
      return std::nullopt;
    }
    std::vector<std::complex<double>> amp(p.size());
    for (size_t i = 0; i < p.size(); ++i) amp[i] = {re[i], im[i]};
    return MomentumWavePacket::tabulated(p, amp);
  }
  errors.invalid("packet.kind", "unknown kind '" + kind + "'");
  return std::nullopt;
}

std::optional<TimeGrid> parse_time_grid(const ordered_json& root,
                                        FieldCollector& errors) {
  if (!root.contains("time_grid")) return std::nullopt;
  const auto& j = root["time_grid"];
  TimeGrid grid;
  grid.t_min = require_number(j, "t_min", errors);
  grid.t_max = require_number(j, "t_max", errors);
  grid.count = static_cast<int>(require_number(j, "count", errors, 2.0));
  if (errors.ok() && (!(grid.t_min < grid.t_max) || grid.count < 2))
    errors.invalid("time_grid", "needs t_min < t_max and count >= 2");
  return grid;
}

std::optional<SmoothPotential> parse_potential(const ordered_json& root,
                                               FieldCollector& errors) {
  if (!root.contains("potential")) return std::nullopt;
  const auto& j = root["potential"];
  const std::string family = j.value("family", "gaussian_bump");
  if (family == "zero") return zero_potential();
  if (family == "gaussian_bump") {
    const double height = require_number(j, "height", errors);
    const double center = require_number(j, "center", errors);
    const double width = require_number(j, "width", errors);
    if (!errors.ok()) return std::nullopt;
    try {
      return gaussian_bump(height, center, width);
    } catch (const Error& e) {
      errors.invalid("potential", e.what());
      return std::nullopt;
    }
  }
  errors.invalid("potential.family", "unknown family '" + family + "'");
  return std::nullopt;
}

}  // namespace

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::free1d: return "free1d";
    case Scenario::free3d: return "free3d";
    case Scenario::barrier: return "barrier";
    case Scenario::hartman_scan: return "hartman-scan";
    case Scenario::wkb: return "wkb";
    case Scenario::classical_oracle: return "classical-oracle";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::free1d, Scenario::free3d, Scenario::barrier,
                     Scenario::hartman_scan, Scenario::wkb,
                     Scenario::classical_oracle}) {
    if (name == scenario_name(s)) return s;
  }
  return std::nullopt;
}

RunConfig parse_config(const std::string& json_text, Scenario scenario) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError({"<document>"},
                          std::string("config is not valid JSON: ") + e.what());
  }
  FieldCollector errors;
  RunConfig config;
  config.scenario = scenario;
  config.echo = root;

  if (root.contains("scenario") &&
      root["scenario"].get<std::string>() != scenario_name(scenario))
    errors.invalid("scenario", "config is for '" +
                                   root["scenario"].get<std::string>() +
                                   "' but the subcommand is '" +
                                   scenario_name(scenario) + "'");

  if (root.contains("units")) {
    config.units.mass = require_number(root["units"], "mass", errors, 1.0);
    if (errors.ok() && !(config.units.mass > 0.0))
      errors.invalid("units.mass", "must be > 0");
  }
  if (root.contains("tolerances")) {
    const auto& j = root["tolerances"];
    if (j.contains("momentum_points"))
      config.arrival.momentum_points = j["momentum_points"].get<int>();
    if (j.contains("time_points"))
      config.arrival.time_points = j["time_points"].get<int>();
    if (j.contains("window_sigmas"))
      config.arrival.window_sigmas = j["window_sigmas"].get<double>();
  }
  config.time_grid = parse_time_grid(root, errors);

  const bool needs_packet = scenario != Scenario::free3d;
  if (needs_packet) config.packet = parse_packet(root, errors);

  const bool needs_x = scenario != Scenario::free3d;
  if (needs_x) config.x = require_number(root, "x", errors);

  switch (scenario) {
    case Scenario::free1d:
      if (root.contains("povm_T_half"))
        config.povm_T_half = root["povm_T_half"].get<std::vector<double>>();
      break;
    case Scenario::free3d: {
      if (!root.contains("profile")) {
        errors.missing("profile");
      } else {
        ProfileSpec profile;
        profile.p0 = require_number(root["profile"], "p0", errors);
        profile.sigma_p = require_number(root["profile"], "sigma_p", errors);
        config.profile = profile;
      }
      if (root.contains("center"))
        config.center = root["center"].get<std::array<double, 3>>();
      if (!config.time_grid) errors.missing("time_grid");
      if (root.contains("t_half"))
        config.t_half_ladder = root["t_half"].get<std::vector<double>>();
      if (root.contains("probes")) {
        for (const auto& p : root["probes"])
          config.probes.push_back(p.get<std::array<double, 3>>());
      }
      break;
    }
    case Scenario::barrier: {
      if (!root.contains("barrier")) {
        errors.missing("barrier");
        break;
      }
      SquareBarrier barrier;
      barrier.height = require_number(root["barrier"], "height", errors);
      barrier.width = require_number(root["barrier"], "width", errors);
      barrier.start = root["barrier"].value("start", 0.0);
      if (errors.ok()) {
        if (!(barrier.height >= 0.0))
          errors.invalid("barrier.height", "must be >= 0");
        if (!(barrier.width > 0.0))
          errors.invalid("barrier.width", "must be > 0");
      }
      config.barrier = barrier;
      break;
    }
    case Scenario::hartman_scan: {
      config.barrier_height = require_number(root, "height", errors);
      if (!root.contains("widths")) {
        errors.missing("widths");
      } else {
        config.widths = root["widths"].get<std::vector<double>>();
        if (config.widths.empty() ||
            !std::is_sorted(config.widths.begin(), config.widths.end()) ||
            config.widths.front() <= 0.0)
          errors.invalid("widths", "must be positive and ascending");
      }
      break;
    }
    case Scenario::wkb:
      config.potential = parse_potential(root, errors);
      if (!config.potential && !root.contains("potential"))
        errors.missing("potential");
      break;
    case Scenario::classical_oracle: {
      config.potential = parse_potential(root, errors);
      if (!config.potential) config.potential = zero_potential();
      if (root.contains("samples"))
        config.samples = root["samples"].get<int>();
      if (config.samples < 1000)
        errors.invalid("samples", "must be >= 1000");
      if (root.contains("seed"))
        config.seed = root["seed"].get<std::uint64_t>();
      if (root.contains("step"))
        config.trajectory_step = root["step"].get<double>();
      break;
    }
  }

  // Cross-field checks that need the packet geometry.
  if (errors.ok() && config.packet && config.barrier) {
    const PacketMoments m = packet_moments(*config.packet);
    if (!(m.q0 < config.barrier->start))
      errors.invalid("packet.q0",
                     "must lie left of barrier.start for far-side formulas");
    if (!(config.x > config.barrier->end()))
      errors.invalid("x", "must lie beyond barrier.start + barrier.width");
  }
  errors.check();
  return config;
}

}  // namespace toa::cli
