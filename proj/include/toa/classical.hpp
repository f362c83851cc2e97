#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "toa/potential.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

struct PhaseSpacePoint {
  double q = 0.0;
  double p = 0.0;
};

// Hamiltonian flow sampled at uniform steps. Energy is conserved along the
// samples up to the integrator drift (checked against `energy_drift`).
struct Trajectory {
  std::vector<double> t;
  std::vector<PhaseSpacePoint> state;
  double mass = 1.0;
  double energy = 0.0;        // initial H(q, p)
  double energy_drift = 0.0;  // max relative deviation along the run

  // Dense output: cubic Hermite interpolation of q between stored steps,
  // with slopes p/m.
  double position(double time) const;
};

struct TrajectoryOptions {
  double step = 0.0;            // 0 -> auto from the potential feature width
  double horizon = 0.0;         // 0 -> auto multiple of the free flight time
  double drift_limit = 1e-8;    // relative energy drift bound
};

// Fourth-order symplectic (Yoshida-composed leapfrog) integration of
// Hamilton's equations. Free motion is reproduced exactly at any step.
// Raises an integration error when the drift bound is exceeded.
Trajectory integrate(PhaseSpacePoint start, const SmoothPotential& potential,
                     double t_end, double step, const UnitsConfig& units,
                     double drift_limit = 1e-8);

// Smallest t > 0 with q(t) = x, from sign-change bracketing on the stepped
// trajectory plus root refinement on the Hermite interpolant. No-arrival
// (energy too low, wrong direction, or horizon exhausted) is a value, not a
// fault.
std::optional<double> arrival_time_trajectory(PhaseSpacePoint start,
                                              const SmoothPotential& potential,
                                              double x,
                                              const UnitsConfig& units,
                                              const TrajectoryOptions& opts = {});

// Energy-derivative route to the same time: Int_{q0}^{x} dq dp(q,E)/dE with
// dp/dE = m/p(q) evaluated analytically. Dual to the trajectory route.
double arrival_time_hj(double E, const SmoothPotential& potential, double q0,
                       double x, const UnitsConfig& units, int points = 256);

struct EnsembleMean {
  double mean = 0.0;
  double standard_error = 0.0;
  double excluded_fraction = 0.0;  // no-arrival draws, excluded from the mean
  int samples_used = 0;
};

// Classical ensemble average of the trajectory arrival time with momenta
// drawn from |psi(p)|^2 (gaussian packets only) and the starting position
// read from the packet phase. Per-draw sub-seeds make the result independent
// of evaluation order and bit-reproducible for a fixed seed.
EnsembleMean ensemble_mean_arrival(const MomentumWavePacket& packet,
                                   const SmoothPotential& potential, double x,
                                   int samples, std::uint64_t seed,
                                   const UnitsConfig& units,
                                   const TrajectoryOptions& opts = {});

}  // namespace toa
