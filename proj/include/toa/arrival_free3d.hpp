#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "toa/numerics.hpp"
#include "toa/scan.hpp"
#include "toa/units.hpp"

namespace toa {

// Detected state at a point in 3D: an arbitrary function of the free
// Hamiltonian applied to the position eigenstate, so its momentum wave
// function is isotropic about the centre, <p|state> ~ profile(|p|) times a
// translation phase. The vanishing of the angular momentum about the centre
// is built in by this construction, never checked dynamically.
struct IsotropicPacket3D {
  std::function<std::complex<double>(double)> radial_profile;  // of p >= 0
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double support_lo = 0.0;  // profile negligible outside [lo, hi]
  double support_hi = 1.0;

  void validate() const;
};

// Shell profile exp(-(p-p0)^2 / (4 sigma^2)) normalised to a unit-norm state.
IsotropicPacket3D gaussian_shell_state(double p0, double sigma_p,
                                       const std::array<double, 3>& center =
                                           {0.0, 0.0, 0.0});

// <state|state> = (2pi)^-3 * 4pi * Int dp p^2 |profile|^2.
double state_norm(const IsotropicPacket3D& state);

struct Options3D {
  int radial_points = 512;
  int time_points = 0;  // 0 -> auto from the oscillation rate
  int threads = 0;
};

// In d dimensions the operator ordering p^-(n+1) (-i d/dp) p^n with
// n = (d-2)/2 puts a p^-n factor on the time eigenfunctions; with the p^(d-1)
// measure the arrival integrand then carries p^(d/2). d = 1 reproduces the
// sqrt(p) weight of the 1D module.
constexpr double eigenstate_momentum_exponent(int dimension) {
  return -(dimension - 2) / 2.0;
}
constexpr double arrival_weight_exponent(int dimension) {
  return dimension / 2.0;
}

// Scan terms of the arrival amplitude <t; x, 0|state>: the angular integral
// is done analytically, leaving the radial quadrature with weight p^(3/2).
ScanTerms make_arrival_terms_3d(const IsotropicPacket3D& state,
                                const UnitsConfig& units,
                                const Options3D& opts = {});

std::complex<double> arrival_amplitude_3d(const IsotropicPacket3D& state,
                                          double t, const UnitsConfig& units,
                                          const Options3D& opts = {});

// Largest deviation over the probe momenta between the state's momentum wave
// function and the one rebuilt from arrival amplitudes restricted to
// [-T_half, T_half]. Tends to 0 as T_half grows: the arrival measure resolves
// the identity on detected states. Evaluated literally as the time integral
// of exp(i E_p t) times the arrival amplitude on a dense symmetric grid.
double subspace_identity_residual(
    const IsotropicPacket3D& state,
    std::span<const std::array<double, 3>> probe_momenta, double T_half,
    const UnitsConfig& units, const Options3D& opts = {});

// Same residual with the time integral done analytically per momentum pair
// (Dirichlet kernel); independent cross-check of the time-grid route.
double subspace_identity_residual_spectral(
    const IsotropicPacket3D& state,
    std::span<const std::array<double, 3>> probe_momenta, double T_half,
    const UnitsConfig& units, const Options3D& opts = {});

}  // namespace toa
