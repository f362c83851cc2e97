#include "toa/arrival_free3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace toa {

namespace {

double probe_magnitude(const std::array<double, 3>& p) {
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

QuadratureNodes radial_nodes(const IsotropicPacket3D& state, int points) {
  QuadratureSpec spec;
  spec.lo = state.support_lo;
  spec.hi = state.support_hi;
  spec.points = points;
  return make_nodes(spec);
}

// sin(w T)/w with the w -> 0 limit.
double dirichlet(double w, double T) {
  if (std::abs(w * T) < 1e-8) return T * (1.0 - (w * T) * (w * T) / 6.0);
  return std::sin(w * T) / w;
}

}  // namespace

void IsotropicPacket3D::validate() const {
  if (!radial_profile)
    fail(ErrorKind::invalid_parameter, "radial profile must be set");
  if (!(support_lo >= 0.0) || !(support_hi > support_lo))
    fail(ErrorKind::invalid_parameter,
         "profile support must satisfy 0 <= lo < hi");
}

double state_norm(const IsotropicPacket3D& state) {
  state.validate();
  const QuadratureNodes nodes = radial_nodes(state, 1024);
  std::vector<double> terms(nodes.x.size());
  for (size_t i = 0; i < nodes.x.size(); ++i) {
    const double p = nodes.x[i];
    terms[i] = nodes.w[i] * p * p * std::norm(state.radial_profile(p));
  }
  const double radial = pairwise_sum(terms);
  return radial * 4.0 * std::numbers::pi /
         std::pow(2.0 * std::numbers::pi, 3);
}

IsotropicPacket3D gaussian_shell_state(double p0, double sigma_p,
                                       const std::array<double, 3>& center) {
  if (!(sigma_p > 0.0) || !(p0 > 0.0))
    fail(ErrorKind::invalid_parameter, "shell state needs p0 > 0, sigma_p > 0");
  IsotropicPacket3D state;
  state.center = center;
  state.support_lo = std::max(0.0, p0 - 8.0 * sigma_p);
  state.support_hi = p0 + 8.0 * sigma_p;
  state.radial_profile = [p0, sigma_p](double p) -> std::complex<double> {
    const double d = p - p0;
    return std::exp(-d * d / (4.0 * sigma_p * sigma_p));
  };
  const double norm = state_norm(state);
  const double scale = 1.0 / std::sqrt(norm);
  auto base = state.radial_profile;
  state.radial_profile = [base, scale](double p) { return scale * base(p); };
  return state;
}

ScanTerms make_arrival_terms_3d(const IsotropicPacket3D& state,
                                const UnitsConfig& units,
                                const Options3D& opts) {
  state.validate();
  units.validate();
  const double m = units.mass;
  const QuadratureNodes nodes = radial_nodes(state, opts.radial_points);
  // (2pi)^-3 * 4pi * sqrt(pi/m) = 1 / (2 pi^(3/2) sqrt(m))
  const double prefactor =
      1.0 / (2.0 * std::pow(std::numbers::pi, 1.5) * std::sqrt(m));
  ScanTerms terms;
  for (size_t k = 0; k < nodes.x.size(); ++k) {
    const double p = nodes.x[k];
    const std::complex<double> profile = state.radial_profile(p);
    if (profile == 0.0) continue;
    terms.push(p * p / (2.0 * m),
               nodes.w[k] * prefactor * std::pow(p, 1.5) * profile);
  }
  return terms;
}

std::complex<double> arrival_amplitude_3d(const IsotropicPacket3D& state,
                                          double t, const UnitsConfig& units,
                                          const Options3D& opts) {
  return make_arrival_terms_3d(state, units, opts).at(t);
}

double subspace_identity_residual(
    const IsotropicPacket3D& state,
    std::span<const std::array<double, 3>> probe_momenta, double T_half,
    const UnitsConfig& units, const Options3D& opts) {
  state.validate();
  units.validate();
  if (T_half < 0.0)
    fail(ErrorKind::invalid_parameter, "T_half must be >= 0");
  if (probe_momenta.empty())
    fail(ErrorKind::invalid_parameter, "need at least one probe momentum");
  const double m = units.mass;
  const double inv_2pi32 = std::pow(2.0 * std::numbers::pi, -1.5);

  double max_residual = 0.0;
  if (T_half == 0.0) {
    for (const auto& probe : probe_momenta) {
      const double p = probe_magnitude(probe);
      max_residual = std::max(
          max_residual, inv_2pi32 * std::abs(state.radial_profile(p)));
    }
    return max_residual;
  }

  // Dense symmetric grid resolving the fastest combined phase
  // (E_probe + E_max of the profile support).
  double e_probe_max = 0.0;
  for (const auto& probe : probe_momenta) {
    const double p = probe_magnitude(probe);
    e_probe_max = std::max(e_probe_max, p * p / (2.0 * m));
  }
  const double e_state_max =
      state.support_hi * state.support_hi / (2.0 * m);
  int count = opts.time_points;
  if (count <= 0) {
    const double cycles =
        (e_probe_max + e_state_max) * T_half / std::numbers::pi;
    count = std::clamp(2 * static_cast<int>(std::ceil(16.0 * cycles)) + 1,
                       2001, 2000001);
  }
  TimeGrid grid;
  grid.t_min = -T_half;
  grid.t_max = T_half;
  grid.count = count;
  const ScanTerms terms = make_arrival_terms_3d(state, units, opts);
  std::vector<double> t(grid.count);
  for (int i = 0; i < grid.count; ++i) t[i] = grid.at(i);
  const auto amplitude = terms.evaluate(t, opts.threads);

  for (const auto& probe : probe_momenta) {
    const double p = probe_magnitude(probe);
    if (!(p > 0.0))
      fail(ErrorKind::domain, "probe momenta must be nonzero");
    const double e_p = p * p / (2.0 * m);
    // trapezoid of exp(i E_p t) * A(t) over [-T, T]
    std::vector<std::complex<double>> integrand(t.size());
    for (size_t j = 0; j < t.size(); ++j)
      integrand[j] = std::polar(1.0, e_p * t[j]) * amplitude[j];
    std::complex<double> acc =
        pairwise_sum(integrand) -
        0.5 * (integrand.front() + integrand.back());
    acc *= grid.dt();
    const std::complex<double> rebuilt =
        std::sqrt(std::numbers::pi / (m * p)) * acc;
    const double residual =
        inv_2pi32 * std::abs(rebuilt - state.radial_profile(p));
    max_residual = std::max(max_residual, residual);
  }
  return max_residual;
}

double subspace_identity_residual_spectral(
    const IsotropicPacket3D& state,
    std::span<const std::array<double, 3>> probe_momenta, double T_half,
    const UnitsConfig& units, const Options3D& opts) {
  state.validate();
  units.validate();
  if (T_half < 0.0)
    fail(ErrorKind::invalid_parameter, "T_half must be >= 0");
  const double m = units.mass;
  const double inv_2pi32 = std::pow(2.0 * std::numbers::pi, -1.5);
  const double prefactor =
      1.0 / (2.0 * std::pow(std::numbers::pi, 1.5) * std::sqrt(m));
  const QuadratureNodes nodes = radial_nodes(state, opts.radial_points);

  double max_residual = 0.0;
  for (const auto& probe : probe_momenta) {
    const double p = probe_magnitude(probe);
    if (!(p > 0.0))
      fail(ErrorKind::domain, "probe momenta must be nonzero");
    const double e_p = p * p / (2.0 * m);
    std::vector<std::complex<double>> terms(nodes.x.size());
    for (size_t k = 0; k < nodes.x.size(); ++k) {
      const double pk = nodes.x[k];
      const double e_k = pk * pk / (2.0 * m);
      terms[k] = nodes.w[k] * std::pow(pk, 1.5) * state.radial_profile(pk) *
                 (2.0 * dirichlet(e_p - e_k, T_half));
    }
    const std::complex<double> rebuilt =
        std::sqrt(std::numbers::pi / (m * p)) * prefactor *
        pairwise_sum(terms);
    const double residual =
        inv_2pi32 * std::abs(rebuilt - state.radial_profile(p));
    max_residual = std::max(max_residual, residual);
  }
  return max_residual;
}

}  // namespace toa
