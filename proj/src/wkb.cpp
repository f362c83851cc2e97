#include "toa/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace toa {

namespace {

constexpr int kMinMomentumPoints = 384;

// Quadrature window on the right half-line; errors out when weight sits at
// momenta that cannot clear the potential between origin and x.
std::pair<double, double> allowed_window(const MomentumWavePacket& packet,
                                         const SmoothPotential& potential,
                                         double x, const UnitsConfig& units) {
  const auto window = channel_momentum_window(packet, Mover::right);
  if (!window)
    fail(ErrorKind::domain, "packet has no right-moving support");
  const double v_max = potential.max_on(0.0, x);
  const double p_min = std::sqrt(2.0 * units.mass * v_max);
  if (window->first <= p_min)
    fail(ErrorKind::turning_point,
         "packet support reaches below the potential ceiling (p_min = " +
             std::to_string(p_min) +
             "); the quasi-classical branch does not cross turning points");
  return *window;
}

double phase_integral(double E, const SmoothPotential& potential, double x,
                      const UnitsConfig& units, int points) {
  QuadratureSpec spec;
  spec.lo = 0.0;
  spec.hi = x;
  spec.points = points;
  const QuadratureNodes nodes = make_nodes(spec);
  std::vector<double> terms(nodes.x.size());
  for (size_t i = 0; i < nodes.x.size(); ++i)
    terms[i] = nodes.w[i] * local_momentum(E, potential, nodes.x[i], units);
  return pairwise_sum(terms);
}

}  // namespace

WkbDiagnostics wkb_diagnostics(const MomentumWavePacket& packet,
                               const SmoothPotential& potential, double x,
                               const UnitsConfig& units) {
  units.validate();
  WkbDiagnostics diag;
  const PacketMoments moments = packet_moments(packet);
  const double v_max = potential.max_on(0.0, std::max(x, 0.0));
  diag.quasi_classical =
      moments.p0 * moments.p0 >= 5.0 * 2.0 * units.mass * v_max;
  if (!diag.quasi_classical)
    diag.warnings.push_back(
        "packet is not deep in the quasi-classical regime (p0^2 < 5 * 2m * "
        "max V)");
  if (x > 0.0) {
    const double E0 = moments.p0 * moments.p0 / (2.0 * units.mass);
    constexpr int samples = 512;
    for (int i = 0; i <= samples; ++i) {
      const double q = x * i / samples;
      const double p = local_momentum(E0, potential, q, units);
      const double value =
          units.mass * std::abs(potential.derivative_at(q)) / (p * p * p);
      diag.validity_max = std::max(diag.validity_max, value);
    }
    if (diag.validity_max > 0.05)
      diag.warnings.push_back(
          "WKB validity diagnostic m|V'|/p^3 = " +
          std::to_string(diag.validity_max) + " exceeds 0.05 on [0, x]");
  }
  return diag;
}

double classical_time_integral(double E, const SmoothPotential& potential,
                               double q_from, double q_to,
                               const UnitsConfig& units, int points) {
  units.validate();
  if (q_from == q_to) return 0.0;
  QuadratureSpec spec;
  spec.lo = std::min(q_from, q_to);
  spec.hi = std::max(q_from, q_to);
  spec.points = points;
  const QuadratureNodes nodes = make_nodes(spec);
  std::vector<double> terms(nodes.x.size());
  for (size_t i = 0; i < nodes.x.size(); ++i)
    terms[i] = nodes.w[i] * units.mass /
               local_momentum(E, potential, nodes.x[i], units);
  const double value = pairwise_sum(terms);
  return q_to >= q_from ? value : -value;
}

double wkb_arrival_probability(const MomentumWavePacket& packet,
                               const SmoothPotential& potential, double x,
                               const UnitsConfig& units,
                               const WkbOptions& opts) {
  units.validate();
  if (x <= 0.0) return 1.0;  // free on the near side: reflection neglected
  const auto [lo, hi] = allowed_window(packet, potential, x, units);
  QuadratureSpec spec;
  spec.lo = lo;
  spec.hi = hi;
  spec.points = std::max(kMinMomentumPoints, opts.arrival.momentum_points);
  const QuadratureNodes nodes = make_nodes(spec);
  std::vector<double> terms(nodes.x.size());
  const double m = units.mass;
  for (size_t i = 0; i < nodes.x.size(); ++i) {
    const double p = nodes.x[i];
    const double E = p * p / (2.0 * m);
    const double p_x = local_momentum(E, potential, x, units);
    terms[i] = nodes.w[i] * (p / p_x) * packet.abs2(p);
  }
  return pairwise_sum(terms);
}

TimeGrid wkb_time_window(const MomentumWavePacket& packet,
                         const SmoothPotential& potential, double x,
                         const UnitsConfig& units, double sigmas, int count) {
  if (x <= 0.0) return default_time_window(packet, x, units, sigmas, count);
  const PacketMoments moments = packet_moments(packet);
  const double m = units.mass;
  const double E0 = moments.p0 * moments.p0 / (2.0 * m);
  // Free flight to the origin plus the slowed traversal to x.
  const double t_cl = m * (0.0 - moments.q0) / moments.p0 +
                      classical_time_integral(E0, potential, 0.0, x, units);
  const double sigma_t =
      m * std::abs(x - moments.q0) * moments.sigma_p /
          (moments.p0 * moments.p0) +
      m / (std::abs(moments.p0) * moments.sigma_p);
  TimeGrid grid;
  grid.t_min = t_cl - sigmas * sigma_t;
  grid.t_max = t_cl + sigmas * sigma_t;
  grid.count = count;
  return grid;
}

ArrivalDistribution wkb_arrival_distribution(const MomentumWavePacket& packet,
                                             const SmoothPotential& potential,
                                             double x, const TimeGrid& grid,
                                             const UnitsConfig& units,
                                             const WkbOptions& opts) {
  units.validate();
  grid.validate();
  if (x <= 0.0) {
    ArrivalDistribution dist =
        arrival_distribution(packet, x, grid, units, opts.arrival);
    const WkbDiagnostics diag = wkb_diagnostics(packet, potential, x, units);
    dist.diagnostics.warnings.insert(dist.diagnostics.warnings.end(),
                                     diag.warnings.begin(),
                                     diag.warnings.end());
    return dist;
  }
  const auto [lo, hi] = allowed_window(packet, potential, x, units);
  const double t_absmax =
      std::max(std::abs(grid.t_min), std::abs(grid.t_max));
  const double m = units.mass;

  QuadratureSpec spec;
  spec.lo = lo;
  spec.hi = hi;
  if (opts.arrival.momentum_points > 0) {
    spec.points = opts.arrival.momentum_points;
  } else {
    const double slope = hi * t_absmax / m + std::abs(x) +
                         std::abs(packet.phase_derivative(0.5 * (lo + hi)));
    spec.points = std::max(kMinMomentumPoints, required_points(slope, hi - lo));
  }
  const QuadratureNodes nodes = make_nodes(spec);

  ScanTerms terms;
  const double prefactor = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (size_t k = 0; k < nodes.x.size(); ++k) {
    const double p = nodes.x[k];
    const std::complex<double> psi = packet.amplitude(p);
    if (psi == 0.0) continue;
    const double E = p * p / (2.0 * m);
    const double p_x = local_momentum(E, potential, x, units);
    const double accumulated_phase =
        phase_integral(E, potential, x, units, opts.position_points);
    const std::complex<double> weight =
        nodes.w[k] * prefactor * (p / m) * std::sqrt(m / p_x) *
        std::polar(1.0, accumulated_phase) * psi;
    terms.push(E, weight);
  }

  std::vector<double> t(grid.count);
  for (int i = 0; i < grid.count; ++i) t[i] = grid.at(i);
  const auto amp = terms.evaluate(t, opts.arrival.threads);

  ArrivalDistribution dist;
  dist.x = x;
  dist.grid = grid;
  dist.density.resize(amp.size());
  for (size_t i = 0; i < amp.size(); ++i) dist.density[i] = std::norm(amp[i]);
  const double dt = grid.dt();
  const double p_arrive = trapezoid(dist.density, dt);
  if (!(p_arrive > 0.0))
    fail(ErrorKind::domain, "arrival density vanishes on the window");
  std::vector<double> weighted(amp.size());
  for (size_t i = 0; i < amp.size(); ++i)
    weighted[i] = dist.density[i] * t[i];
  dist.arrival_probability = p_arrive;
  dist.mean_time = trapezoid(weighted, dt) / p_arrive;
  for (double& d : dist.density) d /= p_arrive;
  const double truncation =
      (dist.density.front() + dist.density.back()) * (grid.t_max - grid.t_min);
  dist.diagnostics.window_truncation = truncation;
  if (truncation > opts.arrival.truncation_limit)
    fail(ErrorKind::window_truncation,
         "time window truncates the arrival density (indicator " +
             std::to_string(truncation) + ")");
  if (truncation > opts.arrival.truncation_warn)
    dist.diagnostics.warnings.push_back(
        "time window truncation indicator " + std::to_string(truncation) +
        " exceeds " + std::to_string(opts.arrival.truncation_warn));
  const WkbDiagnostics diag = wkb_diagnostics(packet, potential, x, units);
  dist.diagnostics.warnings.insert(dist.diagnostics.warnings.end(),
                                   diag.warnings.begin(), diag.warnings.end());
  return dist;
}

double wkb_mean_arrival(const MomentumWavePacket& packet,
                        const SmoothPotential& potential, double x,
                        const UnitsConfig& units, const WkbOptions& opts) {
  units.validate();
  if (x <= 0.0) return mean_arrival_time(packet, x, units, opts.arrival);
  const auto [lo, hi] = allowed_window(packet, potential, x, units);
  QuadratureSpec spec;
  spec.lo = lo;
  spec.hi = hi;
  spec.points = std::max(kMinMomentumPoints, opts.arrival.momentum_points);
  const QuadratureNodes nodes = make_nodes(spec);
  const double m = units.mass;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < nodes.x.size(); ++i) {
    const double p = nodes.x[i];
    const double w = nodes.w[i] * packet.abs2(p);
    if (w == 0.0) continue;
    const double E = p * p / (2.0 * m);
    const double p_x = local_momentum(E, potential, x, units);
    const double flux = w * (p / p_x);
    // -m q0 / p expressed through the packet phase (exact for gaussians).
    const double launch_time = m * packet.phase_derivative(p) / p;
    const double traversal =
        classical_time_integral(E, potential, 0.0, x, units,
                                opts.position_points);
    num += flux * (launch_time + traversal);
    den += flux;
  }
  if (!(den > 0.0)) fail(ErrorKind::domain, "flux weight vanishes");
  return num / den;
}

}  // namespace toa
