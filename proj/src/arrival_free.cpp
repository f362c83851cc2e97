#include "toa/arrival_free.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace toa {

namespace {

constexpr int kMinMomentumPoints = 384;

int auto_momentum_points(const MomentumWavePacket& packet, double x,
                         double window_lo, double window_hi, double t_absmax,
                         const UnitsConfig& units, const ArrivalOptions& opts) {
  if (opts.momentum_points > 0) return opts.momentum_points;
  const double p_hi = std::max(std::abs(window_lo), std::abs(window_hi));
  const double phase_slope = p_hi * t_absmax / units.mass + std::abs(x) +
                             std::abs(packet.phase_derivative(
                                 0.5 * (window_lo + window_hi)));
  return std::max(kMinMomentumPoints,
                  required_points(phase_slope, window_hi - window_lo));
}

std::vector<double> grid_times(const TimeGrid& grid) {
  std::vector<double> t(grid.count);
  for (int i = 0; i < grid.count; ++i) t[i] = grid.at(i);
  return t;
}

// Channel-summed |amplitude|^2 on the grid.
std::vector<double> raw_density(const MomentumWavePacket& packet, double x,
                                const TimeGrid& grid, const UnitsConfig& units,
                                const ArrivalOptions& opts) {
  const double t_absmax =
      std::max(std::abs(grid.t_min), std::abs(grid.t_max));
  const ScanTerms right =
      make_arrival_terms(packet, x, Mover::right, units, t_absmax, opts);
  const ScanTerms left =
      make_arrival_terms(packet, x, Mover::left, units, t_absmax, opts);
  const std::vector<double> t = grid_times(grid);
  const auto ar = right.evaluate(t, opts.threads);
  const auto al = left.evaluate(t, opts.threads);
  std::vector<double> rho(t.size());
  for (size_t i = 0; i < t.size(); ++i)
    rho[i] = std::norm(ar[i]) + std::norm(al[i]);
  return rho;
}

}  // namespace

PacketMoments packet_moments(const MomentumWavePacket& packet) {
  PacketMoments m;
  if (const auto* g = packet.gaussian_params()) {
    m.p0 = g->p0;
    m.sigma_p = g->sigma_p;
    m.q0 = g->q0;
    return m;
  }
  const auto [lo, hi] = packet.support();
  QuadratureSpec spec;
  spec.points = 1024;
  spec.lo = lo;
  spec.hi = hi;
  const QuadratureNodes nodes = make_nodes(spec);
  double w = 0.0, wp = 0.0, wpp = 0.0;
  for (size_t i = 0; i < nodes.x.size(); ++i) {
    const double f = nodes.w[i] * packet.abs2(nodes.x[i]);
    w += f;
    wp += f * nodes.x[i];
    wpp += f * nodes.x[i] * nodes.x[i];
  }
  if (!(w > 0.0))
    fail(ErrorKind::invalid_parameter, "packet has vanishing norm");
  m.p0 = wp / w;
  m.sigma_p = std::sqrt(std::max(0.0, wpp / w - m.p0 * m.p0));
  m.q0 = -packet.phase_derivative(m.p0);
  return m;
}

TimeGrid default_time_window(const MomentumWavePacket& packet, double x,
                             const UnitsConfig& units, double sigmas,
                             int count) {
  units.validate();
  const PacketMoments m = packet_moments(packet);
  if (!(std::abs(m.p0) >= 2.0 * m.sigma_p))
    fail(ErrorKind::invalid_parameter,
         "auto time window needs |p0| >= 2 sigma_p; supply an explicit "
         "TimeGrid for slow or split packets");
  const double t_cl = units.mass * (x - m.q0) / m.p0;
  const double sigma_t =
      units.mass * std::abs(x - m.q0) * m.sigma_p / (m.p0 * m.p0) +
      units.mass / (std::abs(m.p0) * m.sigma_p);
  TimeGrid grid;
  grid.t_min = t_cl - sigmas * sigma_t;
  grid.t_max = t_cl + sigmas * sigma_t;
  grid.count = count;
  return grid;
}

std::optional<std::pair<double, double>> channel_momentum_window(
    const MomentumWavePacket& packet, Mover s) {
  const auto [a, b] = packet.support();
  double lo, hi;
  if (s == Mover::right) {
    lo = std::max(a, 0.0);
    hi = b;
  } else {
    lo = std::max(-b, 0.0);
    hi = -a;
  }
  if (!(hi > lo)) return std::nullopt;
  return std::make_pair(lo, hi);
}

ScanTerms make_arrival_terms(const MomentumWavePacket& packet, double x,
                             Mover s, const UnitsConfig& units,
                             double t_absmax, const ArrivalOptions& opts) {
  units.validate();
  ScanTerms terms;
  const auto window = channel_momentum_window(packet, s);
  if (!window) return terms;
  const auto [lo, hi] = *window;
  QuadratureSpec spec;
  spec.lo = lo;
  spec.hi = hi;
  spec.points =
      auto_momentum_points(packet, x, lo, hi, t_absmax, units, opts);
  const QuadratureNodes nodes = make_nodes(spec);
  const double sign = mover_sign(s);
  const double m = units.mass;
  const double prefactor = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  terms.freq.reserve(nodes.x.size());
  terms.wre.reserve(nodes.x.size());
  terms.wim.reserve(nodes.x.size());
  for (size_t k = 0; k < nodes.x.size(); ++k) {
    const double p = nodes.x[k];
    const std::complex<double> psi = packet.amplitude(sign * p);
    if (psi == 0.0) continue;
    const std::complex<double> weight =
        nodes.w[k] * prefactor * std::sqrt(p / m) *
        std::polar(1.0, sign * p * x) * psi;
    terms.push(p * p / (2.0 * m), weight);
  }
  return terms;
}

std::complex<double> arrival_amplitude(const MomentumWavePacket& packet,
                                       double x, Mover s, double t,
                                       const UnitsConfig& units,
                                       const ArrivalOptions& opts) {
  return make_arrival_terms(packet, x, s, units, std::abs(t), opts).at(t);
}

ChannelProbabilities channel_time_integrals(const MomentumWavePacket& packet,
                                            double x, const TimeGrid& grid,
                                            const UnitsConfig& units,
                                            const ArrivalOptions& opts) {
  grid.validate();
  const double t_absmax =
      std::max(std::abs(grid.t_min), std::abs(grid.t_max));
  const std::vector<double> t = grid_times(grid);
  ChannelProbabilities out;
  for (const Mover s : {Mover::right, Mover::left}) {
    const ScanTerms terms =
        make_arrival_terms(packet, x, s, units, t_absmax, opts);
    const auto amp = terms.evaluate(t, opts.threads);
    std::vector<double> rho(amp.size());
    for (size_t i = 0; i < amp.size(); ++i) rho[i] = std::norm(amp[i]);
    const double value = trapezoid(rho, grid.dt());
    (s == Mover::right ? out.right : out.left) = value;
  }
  return out;
}

ArrivalDistribution arrival_distribution(const MomentumWavePacket& packet,
                                         double x, const TimeGrid& grid,
                                         const UnitsConfig& units,
                                         const ArrivalOptions& opts) {
  grid.validate();
  ArrivalDistribution dist;
  dist.x = x;
  dist.grid = grid;
  std::vector<double> rho = raw_density(packet, x, grid, units, opts);
  const double dt = grid.dt();
  const double p_arrive = trapezoid(rho, dt);
  if (!(p_arrive > 0.0))
    fail(ErrorKind::domain, "arrival density vanishes on the whole window");
  std::vector<double> weighted(rho.size());
  for (size_t i = 0; i < rho.size(); ++i)
    weighted[i] = rho[i] * grid.at(static_cast<int>(i));
  dist.arrival_probability = p_arrive;
  dist.mean_time = trapezoid(weighted, dt) / p_arrive;
  dist.density = std::move(rho);
  for (double& d : dist.density) d /= p_arrive;
  const double truncation =
      (dist.density.front() + dist.density.back()) * (grid.t_max - grid.t_min);
  dist.diagnostics.window_truncation = truncation;
  if (truncation > opts.truncation_limit)
    fail(ErrorKind::window_truncation,
         "time window truncates the arrival density (indicator " +
             std::to_string(truncation) + " > " +
             std::to_string(opts.truncation_limit) + ")");
  if (truncation > opts.truncation_warn)
    dist.diagnostics.warnings.push_back(
        "time window truncation indicator " + std::to_string(truncation) +
        " exceeds " + std::to_string(opts.truncation_warn));
  return dist;
}

double arrival_probability(const MomentumWavePacket& packet, double x,
                           const UnitsConfig& units,
                           const ArrivalOptions& opts) {
  const TimeGrid grid = default_time_window(packet, x, units,
                                            opts.window_sigmas,
                                            opts.time_points);
  return arrival_distribution(packet, x, grid, units, opts)
      .arrival_probability;
}

double mean_arrival_time(const MomentumWavePacket& packet, double x,
                         const UnitsConfig& units,
                         const ArrivalOptions& opts) {
  const TimeGrid grid = default_time_window(packet, x, units,
                                            opts.window_sigmas,
                                            opts.time_points);
  return arrival_distribution(packet, x, grid, units, opts).mean_time;
}

double mean_arrival_time_phase_route(const MomentumWavePacket& packet,
                                     double x, const UnitsConfig& units,
                                     const ArrivalOptions& opts) {
  units.validate();
  double num = 0.0, den = 0.0;
  for (const Mover s : {Mover::right, Mover::left}) {
    const auto window = channel_momentum_window(packet, s);
    if (!window) continue;
    QuadratureSpec spec;
    spec.lo = window->first;
    spec.hi = window->second;
    spec.points = std::max(kMinMomentumPoints, opts.momentum_points);
    const QuadratureNodes nodes = make_nodes(spec);
    const double sign = mover_sign(s);
    for (size_t k = 0; k < nodes.x.size(); ++k) {
      const double p = nodes.x[k];
      const double w = nodes.w[k] * packet.abs2(sign * p);
      if (w == 0.0) continue;
      // d arg psi(sp)/dp at fixed channel: chain rule brings a factor s.
      const double phase_slope = sign * packet.phase_derivative(sign * p);
      num += w * units.mass / p * (sign * x + phase_slope);
      den += w;
    }
  }
  if (!(den > 0.0))
    fail(ErrorKind::domain, "packet has no support on either channel");
  return num / den;
}

double povm_completeness(const MomentumWavePacket& packet, double x,
                         double T_half, const UnitsConfig& units,
                         const ArrivalOptions& opts) {
  if (T_half < 0.0)
    fail(ErrorKind::invalid_parameter, "T_half must be >= 0");
  if (T_half == 0.0) return 0.0;
  const std::vector<double> ladder{T_half};
  return povm_completeness_ladder(packet, x, ladder, units, opts).front();
}

std::vector<double> povm_completeness_ladder(const MomentumWavePacket& packet,
                                             double x,
                                             std::span<const double> T_halves,
                                             const UnitsConfig& units,
                                             const ArrivalOptions& opts) {
  if (T_halves.empty()) return {};
  if (!std::is_sorted(T_halves.begin(), T_halves.end()))
    fail(ErrorKind::invalid_parameter, "T_half ladder must be ascending");
  if (!(T_halves.front() >= 0.0))
    fail(ErrorKind::invalid_parameter, "T_half must be >= 0");
  const double T_max = T_halves.back();
  const double denominator = arrival_probability(packet, x, units, opts);

  // One symmetric master grid; each ladder rung is a cumulative integral of
  // the same non-negative samples, so the ladder is monotone by construction.
  const PacketMoments m = packet_moments(packet);
  const double sigma_t =
      units.mass * std::abs(x - m.q0) * m.sigma_p / (m.p0 * m.p0) +
      units.mass / (std::abs(m.p0) * m.sigma_p);
  const double dt_target = sigma_t / 50.0;
  const int half_count = std::clamp(
      static_cast<int>(std::ceil(T_max / dt_target)), 100, 20000);
  TimeGrid grid;
  grid.t_min = -T_max;
  grid.t_max = T_max;
  grid.count = 2 * half_count + 1;
  const std::vector<double> rho = raw_density(packet, x, grid, units, opts);
  const double dt = grid.dt();

  // Cumulative trapezoid from the centre outwards in symmetric pairs.
  std::vector<double> out;
  out.reserve(T_halves.size());
  const int centre = half_count;
  double acc = 0.0;
  int reached = 0;  // pairs [centre-k, centre+k] fully accumulated
  for (const double T : T_halves) {
    const int k_target = std::min(
        half_count, static_cast<int>(std::floor(T / dt + 1e-12)));
    while (reached < k_target) {
      ++reached;
      const double left_pair = 0.5 * (rho[centre - reached] +
                                      rho[centre - reached + 1]);
      const double right_pair = 0.5 * (rho[centre + reached] +
                                       rho[centre + reached - 1]);
      acc += dt * (left_pair + right_pair);
    }
    out.push_back(acc / denominator);
  }
  return out;
}

std::complex<double> time_eigenstate_overlap(double t, double t_prime,
                                             double damping) {
  if (!(damping > 0.0))
    fail(ErrorKind::invalid_parameter, "overlap regulator must be > 0");
  // (1/2pi) Int_0^inf dE exp(i E (t'-t)) exp(-damping E), cut once the
  // regulator has fallen below 1e-18.
  const double dt = t_prime - t;
  const double e_max = 41.5 / damping;
  QuadratureSpec spec;
  spec.lo = 0.0;
  spec.hi = e_max;
  spec.points = std::max(512, required_points(std::abs(dt), e_max));
  const std::complex<double> i_unit{0.0, 1.0};
  return oscillatory_integral(
             [&](double E) {
               return std::exp((i_unit * dt - damping) * E);
             },
             spec, std::abs(dt)) /
         (2.0 * std::numbers::pi);
}

}  // namespace toa
