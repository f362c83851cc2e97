#pragma once

#include "toa/arrival_free.hpp"
#include "toa/potential.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

// Quasi-classical validity data for a (packet, potential, x) configuration.
// validity_max is the largest m|V'(q)|/p(q)^3 along [0, x] at the packet's
// central energy (<= 0.05 is treated as comfortably quasi-classical);
// quasi_classical records p0^2 >= 5 * 2m * max V. Failures downgrade to
// warnings, never hard errors.
struct WkbDiagnostics {
  double validity_max = 0.0;
  bool quasi_classical = true;
  std::vector<std::string> warnings;
};

WkbDiagnostics wkb_diagnostics(const MomentumWavePacket& packet,
                               const SmoothPotential& potential, double x,
                               const UnitsConfig& units);

struct WkbOptions {
  ArrivalOptions arrival;
  int position_points = 192;  // q-quadrature nodes for the phase integrals
};

// Classical traversal time Int m/p(q) dq between two points at energy E.
double classical_time_integral(double E, const SmoothPotential& potential,
                               double q_from, double q_to,
                               const UnitsConfig& units, int points = 256);

// Probability of ever arriving at x for packets launched from the left far
// above the potential. On the near side (x <= 0) reflection is neglected and
// the free value 1 is returned; beyond the origin the local-momentum flux
// factor Int dp (p/p(x)) |psi(p)|^2 applies (it may exceed 1 where the
// particle moves slowly).
double wkb_arrival_probability(const MomentumWavePacket& packet,
                               const SmoothPotential& potential, double x,
                               const UnitsConfig& units,
                               const WkbOptions& opts = {});

// Arrival-time density: identical to the free density for x <= 0; for x > 0
// each momentum component accumulates the phase Int_0^x p(q) dq and the
// amplitude carries 1/sqrt(p(x)).
ArrivalDistribution wkb_arrival_distribution(const MomentumWavePacket& packet,
                                             const SmoothPotential& potential,
                                             double x, const TimeGrid& grid,
                                             const UnitsConfig& units,
                                             const WkbOptions& opts = {});

// Window for the x > 0 density: the free window shifted by the extra
// traversal time through the potential at the central energy.
TimeGrid wkb_time_window(const MomentumWavePacket& packet,
                         const SmoothPotential& potential, double x,
                         const UnitsConfig& units, double sigmas = 10.0,
                         int count = 2001);

// Mean arrival time, flux-weighted classical times:
//   (1/P) Int dp (p/p(x)) |psi|^2 [ -m q0/p + Int_0^x m/p(q) dq ]    (x > 0)
// with the free formula for x <= 0. Also obtainable as the first moment of
// wkb_arrival_distribution; the routes agree to ~1e-3 relative.
double wkb_mean_arrival(const MomentumWavePacket& packet,
                        const SmoothPotential& potential, double x,
                        const UnitsConfig& units, const WkbOptions& opts = {});

}  // namespace toa
