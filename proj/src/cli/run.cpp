#include "run.hpp"

#include <chrono>
#include <cmath>

#include "toa/arrival_free3d.hpp"
#include "toa/classical.hpp"
#include "toa/version.hpp"
#include "toa/wkb.hpp"

namespace toa::cli {

namespace {

using nlohmann::ordered_json;

Table distribution_table(const ArrivalDistribution& dist) {
  Table table;
  table.name = "distribution";
  table.columns = {"t", "density"};
  table.rows.reserve(dist.density.size());
  for (size_t i = 0; i < dist.density.size(); ++i)
    table.rows.push_back({dist.grid.at(static_cast<int>(i)), dist.density[i]});
  return table;
}

ordered_json grid_json(const TimeGrid& grid) {
  return {{"t_min", grid.t_min}, {"t_max", grid.t_max}, {"count", grid.count}};
}

void run_free1d(const RunConfig& c, RunReport& report) {
  const auto& packet = *c.packet;
  const TimeGrid grid =
      c.time_grid ? *c.time_grid
                  : default_time_window(packet, c.x, c.units,
                                        c.arrival.window_sigmas,
                                        c.arrival.time_points);
  const auto dist = arrival_distribution(packet, c.x, grid, c.units, c.arrival);
  report.results["x"] = c.x;
  report.results["window"] = grid_json(grid);
  report.results["arrival_probability"] = dist.arrival_probability;
  report.results["mean_time"] = dist.mean_time;
  report.results["mean_time_phase_route"] =
      mean_arrival_time_phase_route(packet, c.x, c.units, c.arrival);
  report.results["negative_momentum_fraction"] =
      negative_momentum_fraction(packet);
  report.results["window_truncation"] = dist.diagnostics.window_truncation;
  report.warnings = dist.diagnostics.warnings;
  report.tables.push_back(distribution_table(dist));
  if (!c.povm_T_half.empty()) {
    const auto values = povm_completeness_ladder(packet, c.x, c.povm_T_half,
                                                 c.units, c.arrival);
    Table povm;
    povm.name = "povm";
    povm.columns = {"T_half", "completeness"};
    for (size_t i = 0; i < values.size(); ++i)
      povm.rows.push_back({c.povm_T_half[i], values[i]});
    report.tables.push_back(std::move(povm));
  }
}

void run_free3d(const RunConfig& c, RunReport& report) {
  const auto state =
      gaussian_shell_state(c.profile->p0, c.profile->sigma_p, c.center);
  report.results["state_norm"] = state_norm(state);
  const TimeGrid grid = *c.time_grid;
  const ScanTerms terms = make_arrival_terms_3d(state, c.units);
  const auto amplitude = terms.evaluate(grid, c.threads);
  Table table;
  table.name = "amplitude";
  table.columns = {"t", "re", "im", "abs2"};
  for (int i = 0; i < grid.count; ++i)
    table.rows.push_back({grid.at(i), amplitude[i].real(),
                          amplitude[i].imag(), std::norm(amplitude[i])});
  report.tables.push_back(std::move(table));

  if (!c.t_half_ladder.empty() && !c.probes.empty()) {
    Table residuals;
    residuals.name = "residual";
    residuals.columns = {"T_half", "residual"};
    for (double T : c.t_half_ladder)
      residuals.rows.push_back(
          {T, subspace_identity_residual(state, c.probes, T, c.units)});
    report.results["final_residual"] = residuals.rows.back()[1];
    report.tables.push_back(std::move(residuals));
  }
}

void run_barrier(const RunConfig& c, RunReport& report) {
  const auto& packet = *c.packet;
  const auto& barrier = *c.barrier;
  const PacketMoments moments = packet_moments(packet);
  const double p_V = barrier.threshold_momentum(c.units);
  const auto at_p0 = transmission(moments.p0, barrier, c.units);
  report.results["threshold_momentum"] = p_V;
  report.results["transmission_at_p0"] = {
      {"re", at_p0.T.real()},
      {"im", at_p0.T.imag()},
      {"abs2", std::norm(at_p0.T)},
      {"phase", at_p0.phase},
      {"wigner_phase_derivative", at_p0.wigner_phase_derivative}};
  BarrierOptions opts;
  opts.arrival = c.arrival;
  report.results["transmitted_probability"] =
      transmitted_arrival_probability(packet, barrier, c.units, opts);
  const double mean_phase =
      mean_transmitted_arrival(packet, c.x, barrier, c.units, opts);
  report.results["mean_time_phase_route"] = mean_phase;
  const TimeGrid grid =
      c.time_grid ? *c.time_grid
                  : transmitted_time_window(packet, c.x, barrier, c.units,
                                            c.arrival.window_sigmas,
                                            c.arrival.time_points, opts);
  const auto dist = transmitted_arrival_distribution(packet, c.x, barrier,
                                                     grid, c.units, opts);
  report.results["mean_time_moment_route"] = dist.mean_time;
  report.results["free_mean_time"] =
      mean_arrival_time(packet, c.x, c.units, c.arrival);
  report.results["advancement"] =
      mean_phase - report.results["free_mean_time"].get<double>();
  report.results["window"] = grid_json(grid);
  report.warnings = dist.diagnostics.warnings;
  report.tables.push_back(distribution_table(dist));

  Table scan;
  scan.name = "transmission";
  scan.columns = {"p", "re", "im", "abs", "phase"};
  std::vector<double> ps;
  const double p_hi = std::max(4.0 * p_V, moments.p0 + 8.0 * moments.sigma_p);
  for (int i = 1; i <= 400; ++i) ps.push_back(p_hi * i / 400.0);
  const auto tscan = transmission_scan(ps, barrier, c.units);
  for (size_t i = 0; i < ps.size(); ++i)
    scan.rows.push_back({ps[i], tscan.T[i].real(), tscan.T[i].imag(),
                         std::abs(tscan.T[i]), tscan.phase[i]});
  report.tables.push_back(std::move(scan));
}

void run_hartman(const RunConfig& c, RunReport& report) {
  BarrierOptions opts;
  opts.arrival = c.arrival;
  const auto scan = hartman_scan(*c.packet, c.x, c.barrier_height, c.widths,
                                 c.units, opts);
  report.results["free_mean_time"] = scan.free_mean;
  report.results["sign_changes"] = scan.sign_changes;
  if (scan.crossover_bracket) {
    report.results["crossover_bracket"] = {
        {"lo", scan.crossover_bracket->first},
        {"hi", scan.crossover_bracket->second}};
  } else {
    report.results["crossover_bracket"] = nullptr;
  }
  Table table;
  table.name = "scan";
  table.columns = {"width", "mean_time", "advancement"};
  for (const auto& point : scan.points)
    table.rows.push_back({point.width, point.mean_time, point.advancement});
  report.tables.push_back(std::move(table));
}

void run_wkb(const RunConfig& c, RunReport& report) {
  const auto& packet = *c.packet;
  const auto& potential = *c.potential;
  WkbOptions opts;
  opts.arrival = c.arrival;
  const auto diag = wkb_diagnostics(packet, potential, c.x, c.units);
  report.results["validity_max"] = diag.validity_max;
  report.results["quasi_classical"] = diag.quasi_classical;
  report.results["arrival_probability"] =
      wkb_arrival_probability(packet, potential, c.x, c.units, opts);
  report.results["mean_time"] =
      wkb_mean_arrival(packet, potential, c.x, c.units, opts);
  const TimeGrid grid =
      c.time_grid ? *c.time_grid
                  : wkb_time_window(packet, potential, c.x, c.units,
                                    c.arrival.window_sigmas,
                                    c.arrival.time_points);
  const auto dist =
      wkb_arrival_distribution(packet, potential, c.x, grid, c.units, opts);
  report.results["mean_time_moment_route"] = dist.mean_time;
  report.results["window"] = grid_json(grid);
  report.warnings = dist.diagnostics.warnings;
  report.tables.push_back(distribution_table(dist));
}

void run_classical(const RunConfig& c, RunReport& report) {
  const auto& packet = *c.packet;
  const auto& potential = *c.potential;
  TrajectoryOptions opts;
  opts.step = c.trajectory_step;
  const auto ensemble = ensemble_mean_arrival(packet, potential, c.x,
                                              c.samples, c.seed, c.units,
                                              opts);
  report.results["ensemble_mean"] = ensemble.mean;
  report.results["standard_error"] = ensemble.standard_error;
  report.results["excluded_fraction"] = ensemble.excluded_fraction;
  report.results["samples_used"] = ensemble.samples_used;
  const PacketMoments moments = packet_moments(packet);
  const double E0 = moments.p0 * moments.p0 / (2.0 * c.units.mass);
  const auto t_traj = arrival_time_trajectory({moments.q0, moments.p0},
                                              potential, c.x, c.units, opts);
  if (t_traj)
    report.results["central_trajectory_time"] = *t_traj;
  else
    report.results["central_trajectory_time"] = nullptr;
  try {
    report.results["central_energy_derivative_time"] =
        arrival_time_hj(E0, potential, moments.q0, c.x, c.units);
  } catch (const Error&) {
    report.results["central_energy_derivative_time"] = nullptr;
  }
}

}  // namespace

RunReport run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.scenario = scenario_name(config.scenario);
  report.version = kVersion;
  report.kernel = std::string(kernels::isa_name(kernels::best_isa()));
  report.threads = max_threads();
  report.config_echo = config.echo;
  report.results = ordered_json::object();

  switch (config.scenario) {
    case Scenario::free1d: run_free1d(config, report); break;
    case Scenario::free3d: run_free3d(config, report); break;
    case Scenario::barrier: run_barrier(config, report); break;
    case Scenario::hartman_scan: run_hartman(config, report); break;
    case Scenario::wkb: run_wkb(config, report); break;
    case Scenario::classical_oracle: run_classical(config, report); break;
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace toa::cli
