#include "toa/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace toa {

namespace {

constexpr double kThresholdBand = 1e-8;  // |p - p_V| < band*p_V -> series
constexpr int kMinMomentumPoints = 384;

struct BarrierAmplitudes {
  std::complex<double> T;
  std::complex<double> R;
};

// Interface-matching denominator D and the reflection numerator, evaluated
// on the numerically stable branch for the sign of p - p_V.
BarrierAmplitudes closed_form(double p, double p_V, double a) {
  const std::complex<double> i_unit{0.0, 1.0};
  if (p_V == 0.0) return {1.0, 0.0};
  std::complex<double> D;
  std::complex<double> r_num;
  const double band = kThresholdBand * p_V;
  if (std::abs(p - p_V) < band) {
    // (p' a)^2 is tiny here; sin/cos expanded as real series in it.
    const double w = (p * p - p_V * p_V) * a * a;
    const double cos_series = 1.0 - w / 2.0 + w * w / 24.0;
    const double sinc_series = a * (1.0 - w / 6.0 + w * w / 120.0);
    const double sum_sq = 2.0 * p * p - p_V * p_V;  // p^2 + p'^2
    D = cos_series - i_unit * (sum_sq / (2.0 * p)) * sinc_series;
    r_num = -i_unit * (p_V * p_V / (2.0 * p)) * sinc_series;
  } else if (p > p_V) {
    const double pp = std::sqrt(p * p - p_V * p_V);
    const double u = pp * a;
    D = std::cos(u) -
        i_unit * ((p * p + pp * pp) / (2.0 * p * pp)) * std::sin(u);
    r_num = -i_unit * (p_V * p_V / (2.0 * p * pp)) * std::sin(u);
  } else {
    const double kappa = std::sqrt(p_V * p_V - p * p);
    const double v = kappa * a;
    D = std::cosh(v) -
        i_unit * ((p * p - kappa * kappa) / (2.0 * p * kappa)) * std::sinh(v);
    r_num = -i_unit * (p_V * p_V / (2.0 * p * kappa)) * std::sinh(v);
  }
  return {std::polar(1.0, -p * a) / D, r_num / D};
}

ScanTerms make_transmitted_terms(const MomentumWavePacket& packet, double x,
                                 const SquareBarrier& barrier,
                                 const UnitsConfig& units, double t_absmax,
                                 const ArrivalOptions& aopts) {
  ScanTerms base = make_arrival_terms(packet, x, Mover::right, units,
                                      t_absmax, aopts);
  const double p_V = barrier.threshold_momentum(units);
  const double m = units.mass;
  for (size_t k = 0; k < base.size(); ++k) {
    const double p = std::sqrt(2.0 * m * base.freq[k]);
    const std::complex<double> T = closed_form(p, p_V, barrier.width).T;
    const std::complex<double> w =
        T * std::complex<double>{base.wre[k], base.wim[k]};
    base.wre[k] = w.real();
    base.wim[k] = w.imag();
  }
  return base;
}

void check_far_side_preconditions(const MomentumWavePacket& packet, double x,
                                  const SquareBarrier& barrier,
                                  const BarrierOptions& opts) {
  if (!(x > barrier.end()))
    fail(ErrorKind::domain,
         "far-side amplitude assumes the detection point lies beyond the "
         "barrier (x > start + width)");
  const PacketMoments m = packet_moments(packet);
  if (!(m.q0 < barrier.start))
    fail(ErrorKind::domain,
         "far-side amplitude assumes the packet is prepared to the left of "
         "the barrier (q0 < start)");
  const double neg = negative_momentum_fraction(packet);
  if (neg > opts.negative_momentum_limit)
    fail(ErrorKind::domain,
         "far-side amplitude assumes a right-mover packet; negative-momentum "
         "fraction " + std::to_string(neg) + " exceeds " +
             std::to_string(opts.negative_momentum_limit));
}

struct FilteredQuadrature {
  QuadratureNodes nodes;
  std::vector<double> weight;  // node weight * |T psi|^2
  double total = 0.0;
};

FilteredQuadrature filtered_weights(const MomentumWavePacket& packet,
                                    const SquareBarrier& barrier,
                                    const UnitsConfig& units,
                                    const BarrierOptions& opts) {
  const auto window = channel_momentum_window(packet, Mover::right);
  if (!window)
    fail(ErrorKind::domain, "packet has no right-moving support");
  QuadratureSpec spec;
  spec.lo = window->first;
  spec.hi = window->second;
  spec.points = std::max(kMinMomentumPoints, opts.arrival.momentum_points);
  FilteredQuadrature out;
  out.nodes = make_nodes(spec);
  out.weight.resize(out.nodes.x.size());
  const double p_V = barrier.threshold_momentum(units);
  for (size_t k = 0; k < out.nodes.x.size(); ++k) {
    const double p = out.nodes.x[k];
    const std::complex<double> T = closed_form(p, p_V, barrier.width).T;
    out.weight[k] = out.nodes.w[k] * std::norm(T) * packet.abs2(p);
  }
  out.total = pairwise_sum(out.weight);
  return out;
}

}  // namespace

void SquareBarrier::validate() const {
  if (!(height >= 0.0))
    fail(ErrorKind::invalid_parameter, "barrier height must be >= 0");
  if (!(width > 0.0))
    fail(ErrorKind::invalid_parameter, "barrier width must be > 0");
}

double SquareBarrier::threshold_momentum(const UnitsConfig& units) const {
  units.validate();
  return std::sqrt(2.0 * units.mass * height);
}

TransmissionResult transmission(double p, const SquareBarrier& barrier,
                                const UnitsConfig& units) {
  barrier.validate();
  units.validate();
  if (!(p > 0.0))
    fail(ErrorKind::domain, "transmission needs p > 0");
  const double p_V = barrier.threshold_momentum(units);
  const BarrierAmplitudes amp = closed_form(p, p_V, barrier.width);
  TransmissionResult result;
  result.T = amp.T;
  result.R = amp.R;
  result.phase = std::arg(amp.T);
  result.wigner_phase_derivative = wigner_phase_derivative(p, barrier, units);
  return result;
}

double wigner_phase_derivative(double p, const SquareBarrier& barrier,
                               const UnitsConfig& units) {
  barrier.validate();
  units.validate();
  if (!(p > 0.0))
    fail(ErrorKind::domain, "phase derivative needs p > 0");
  const double p_V = barrier.threshold_momentum(units);
  if (p_V == 0.0) return 0.0;
  const double scale = std::max(p, p_V);
  double h = 1e-5 * scale;
  for (int attempt = 0; attempt < 24; ++attempt) {
    if (p - h <= 0.0) {
      h = 0.5 * p;
      continue;
    }
    const std::complex<double> tm = closed_form(p - h, p_V, barrier.width).T;
    const std::complex<double> t0 = closed_form(p, p_V, barrier.width).T;
    const std::complex<double> tp = closed_form(p + h, p_V, barrier.width).T;
    const double d1 = std::remainder(std::arg(t0) - std::arg(tm),
                                     2.0 * std::numbers::pi);
    const double d2 = std::remainder(std::arg(tp) - std::arg(t0),
                                     2.0 * std::numbers::pi);
    // Halve the stencil until each half-step moves the phase by < pi/2;
    // beyond that the finite difference cannot be trusted near resonances.
    if (std::abs(d1) < 0.5 * std::numbers::pi &&
        std::abs(d2) < 0.5 * std::numbers::pi)
      return (d1 + d2) / (2.0 * h);
    h *= 0.5;
  }
  fail(ErrorKind::aliasing,
       "transmission phase varies too rapidly at p = " + std::to_string(p) +
           " for a finite-difference derivative");
}

TransmissionScan transmission_scan(std::span<const double> p,
                                   const SquareBarrier& barrier,
                                   const UnitsConfig& units) {
  barrier.validate();
  units.validate();
  if (!std::is_sorted(p.begin(), p.end()))
    fail(ErrorKind::invalid_parameter, "scan momenta must be ascending");
  TransmissionScan scan;
  scan.p.assign(p.begin(), p.end());
  scan.T.resize(p.size());
  const double p_V = barrier.threshold_momentum(units);
  for (size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) fail(ErrorKind::domain, "scan momenta must be > 0");
    scan.T[i] = closed_form(p[i], p_V, barrier.width).T;
  }
  scan.phase = unwrap_phase(scan.T);
  return scan;
}

std::complex<double> transmitted_arrival_amplitude(
    const MomentumWavePacket& packet, double x, const SquareBarrier& barrier,
    double t, const UnitsConfig& units, const BarrierOptions& opts) {
  barrier.validate();
  check_far_side_preconditions(packet, x, barrier, opts);
  return make_transmitted_terms(packet, x, barrier, units, std::abs(t),
                                opts.arrival)
      .at(t);
}

double transmitted_arrival_probability(const MomentumWavePacket& packet,
                                       const SquareBarrier& barrier,
                                       const UnitsConfig& units,
                                       const BarrierOptions& opts) {
  barrier.validate();
  units.validate();
  return filtered_weights(packet, barrier, units, opts).total;
}

TimeGrid transmitted_time_window(const MomentumWavePacket& packet, double x,
                                 const SquareBarrier& barrier,
                                 const UnitsConfig& units, double sigmas,
                                 int count, const BarrierOptions& opts) {
  const FilteredQuadrature fq = filtered_weights(packet, barrier, units, opts);
  if (!(fq.total > 0.0))
    fail(ErrorKind::domain, "transmitted weight vanishes");
  const double m = units.mass;
  const double q0 = -packet.phase_derivative(packet_moments(packet).p0);
  double t_mean = 0.0, t_sq = 0.0, p_mean = 0.0, p_sq = 0.0;
  for (size_t k = 0; k < fq.nodes.x.size(); ++k) {
    const double p = fq.nodes.x[k];
    const double w = fq.weight[k] / fq.total;
    const double tau =
        m / p * (x - q0 + wigner_phase_derivative(p, barrier, units));
    t_mean += w * tau;
    t_sq += w * tau * tau;
    p_mean += w * p;
    p_sq += w * p * p;
  }
  const double t_spread = std::sqrt(std::max(0.0, t_sq - t_mean * t_mean));
  const double p_spread = std::sqrt(std::max(1e-300, p_sq - p_mean * p_mean));
  const double sigma_t = t_spread + m / (p_mean * p_spread);
  TimeGrid grid;
  grid.t_min = t_mean - sigmas * sigma_t;
  grid.t_max = t_mean + sigmas * sigma_t;
  grid.count = count;
  return grid;
}

ArrivalDistribution transmitted_arrival_distribution(
    const MomentumWavePacket& packet, double x, const SquareBarrier& barrier,
    const TimeGrid& grid, const UnitsConfig& units,
    const BarrierOptions& opts) {
  barrier.validate();
  grid.validate();
  check_far_side_preconditions(packet, x, barrier, opts);
  const double t_absmax =
      std::max(std::abs(grid.t_min), std::abs(grid.t_max));
  const ScanTerms terms =
      make_transmitted_terms(packet, x, barrier, units, t_absmax,
                             opts.arrival);
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
    fail(ErrorKind::domain, "transmitted density vanishes on the window");
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
         "time window truncates the transmitted density (indicator " +
             std::to_string(truncation) + ")");
  if (truncation > opts.arrival.truncation_warn)
    dist.diagnostics.warnings.push_back(
        "time window truncation indicator " + std::to_string(truncation) +
        " exceeds " + std::to_string(opts.arrival.truncation_warn));
  return dist;
}

double mean_transmitted_arrival(const MomentumWavePacket& packet, double x,
                                const SquareBarrier& barrier,
                                const UnitsConfig& units,
                                const BarrierOptions& opts) {
  barrier.validate();
  check_far_side_preconditions(packet, x, barrier, opts);
  const FilteredQuadrature fq = filtered_weights(packet, barrier, units, opts);
  if (!(fq.total > 0.0))
    fail(ErrorKind::domain, "transmitted weight vanishes");
  const double m = units.mass;
  std::vector<double> terms(fq.nodes.x.size());
  for (size_t k = 0; k < fq.nodes.x.size(); ++k) {
    const double p = fq.nodes.x[k];
    if (fq.weight[k] == 0.0) continue;
    const double phase_slope = packet.phase_derivative(p);  // -q0 for gaussians
    terms[k] = fq.weight[k] * m / p *
               (x + phase_slope + wigner_phase_derivative(p, barrier, units));
  }
  return pairwise_sum(terms) / fq.total;
}

double mean_transmitted_arrival_moment_route(const MomentumWavePacket& packet,
                                             double x,
                                             const SquareBarrier& barrier,
                                             const UnitsConfig& units,
                                             const BarrierOptions& opts) {
  const TimeGrid grid = transmitted_time_window(
      packet, x, barrier, units, opts.arrival.window_sigmas,
      opts.arrival.time_points, opts);
  return transmitted_arrival_distribution(packet, x, barrier, grid, units,
                                          opts)
      .mean_time;
}

HartmanScanResult hartman_scan(const MomentumWavePacket& packet, double x,
                               double height, std::span<const double> widths,
                               const UnitsConfig& units,
                               const BarrierOptions& opts) {
  if (widths.empty())
    fail(ErrorKind::invalid_parameter, "width ladder must not be empty");
  if (!std::is_sorted(widths.begin(), widths.end()) || !(widths.front() > 0.0))
    fail(ErrorKind::invalid_parameter,
         "width ladder must be positive and ascending");
  HartmanScanResult result;
  // Free reference through the same right-channel quadrature with T = 1, so
  // the advancement vanishes identically as the width goes to 0.
  {
    const SquareBarrier no_barrier{0.0, 1.0, 0.0};
    const FilteredQuadrature fq =
        filtered_weights(packet, no_barrier, units, opts);
    std::vector<double> terms(fq.nodes.x.size());
    for (size_t k = 0; k < fq.nodes.x.size(); ++k) {
      const double p = fq.nodes.x[k];
      terms[k] = fq.weight[k] * units.mass / p *
                 (x + packet.phase_derivative(p));
    }
    result.free_mean = pairwise_sum(terms) / fq.total;
  }
  result.points.resize(widths.size());
  parallel_for(static_cast<int>(widths.size()), opts.arrival.threads,
               [&](int i) {
                 SquareBarrier barrier{height, widths[i], 0.0};
                 const double mean =
                     mean_transmitted_arrival(packet, x, barrier, units, opts);
                 result.points[i] = {widths[i], mean,
                                     mean - result.free_mean};
               });
  for (size_t i = 1; i < result.points.size(); ++i) {
    const double prev = result.points[i - 1].advancement;
    const double curr = result.points[i].advancement;
    if (prev == 0.0 || curr == 0.0 || (prev > 0.0) == (curr > 0.0)) continue;
    ++result.sign_changes;
    if (!result.crossover_bracket)
      result.crossover_bracket =
          std::make_pair(result.points[i - 1].width, result.points[i].width);
  }
  return result;
}

}  // namespace toa
