#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "toa/numerics.hpp"
#include "toa/scan.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

// Sign-of-momentum degeneracy label of the energy representation:
// right-movers carry p > 0, left-movers p < 0. Every density sums over both
// channels; packets are never assumed one-sided.
enum class Mover { right, left };

inline constexpr double mover_sign(Mover s) {
  return s == Mover::right ? 1.0 : -1.0;
}

struct ArrivalOptions {
  int momentum_points = 0;     // 0 -> auto from the 16-points-per-period rule
  int time_points = 2001;      // auto time windows use this many samples
  double window_sigmas = 10.0; // half-width of the auto window in sigma_t
  double truncation_warn = 1e-3;
  double truncation_limit = 1e-1;
  int threads = 0;             // 0 -> module default
};

struct ArrivalDiagnostics {
  // (density(t_min) + density(t_max)) * window width; ~fraction of mass at
  // risk outside the window.
  double window_truncation = 0.0;
  std::vector<std::string> warnings;
};

// Normalised arrival-time density at a detection point.
struct ArrivalDistribution {
  double x = 0.0;
  TimeGrid grid;
  std::vector<double> density;       // trapezoid-integrates to 1
  double arrival_probability = 0.0;  // time-integrated, before normalisation
  double mean_time = 0.0;
  ArrivalDiagnostics diagnostics;
};

// Derived centre/spread of |psi|^2 plus the phase-encoded starting position;
// the classical crossing time and its spread set the default time window.
struct PacketMoments {
  double p0 = 0.0;
  double sigma_p = 0.0;
  double q0 = 0.0;
};
PacketMoments packet_moments(const MomentumWavePacket& packet);

// [t_cl - S*sigma_t, t_cl + S*sigma_t] around the classical crossing time,
// with sigma_t covering both ballistic spread and slow-momentum tails.
// Requires |p0| >= 2 sigma_p; slower packets need an explicit grid.
TimeGrid default_time_window(const MomentumWavePacket& packet, double x,
                             const UnitsConfig& units, double sigmas = 10.0,
                             int count = 2001);

// Momentum window of channel s (positive half-line), empty if the packet has
// no support there.
std::optional<std::pair<double, double>> channel_momentum_window(
    const MomentumWavePacket& packet, Mover s);

// Scan terms of <t x s 0|psi> for one channel; amplitude(t) = terms.at(t).
ScanTerms make_arrival_terms(const MomentumWavePacket& packet, double x,
                             Mover s, const UnitsConfig& units,
                             double t_absmax, const ArrivalOptions& opts = {});

// Arrival amplitude of channel s at time t.
std::complex<double> arrival_amplitude(const MomentumWavePacket& packet,
                                       double x, Mover s, double t,
                                       const UnitsConfig& units,
                                       const ArrivalOptions& opts = {});

// Probability of ever arriving at x, computed the long way as the time
// integral of the density over the default window. Equals the momentum-side
// sum of |psi(sp)|^2 over both channels (= 1 for a normalised packet).
double arrival_probability(const MomentumWavePacket& packet, double x,
                           const UnitsConfig& units,
                           const ArrivalOptions& opts = {});

struct ChannelProbabilities {
  double right = 0.0;
  double left = 0.0;
  double total() const { return right + left; }
};
// Per-channel time integrals on an explicit grid (no truncation checks);
// useful when only ratios are meaningful, e.g. symmetric packets.
ChannelProbabilities channel_time_integrals(const MomentumWavePacket& packet,
                                            double x, const TimeGrid& grid,
                                            const UnitsConfig& units,
                                            const ArrivalOptions& opts = {});

ArrivalDistribution arrival_distribution(const MomentumWavePacket& packet,
                                         double x, const TimeGrid& grid,
                                         const UnitsConfig& units,
                                         const ArrivalOptions& opts = {});

// First moment of the normalised density on the default window.
double mean_arrival_time(const MomentumWavePacket& packet, double x,
                         const UnitsConfig& units,
                         const ArrivalOptions& opts = {});

// Phase-derivative route to the same mean: momentum quadrature of
// (m/p)(s x + d arg psi(sp)/dp) over |psi(sp)|^2, channel-summed. Used as a
// cross-check of the first-moment route.
double mean_arrival_time_phase_route(const MomentumWavePacket& packet,
                                     double x, const UnitsConfig& units,
                                     const ArrivalOptions& opts = {});

// Fraction of the arrival measure accumulated in [-T_half, T_half], relative
// to the full arrival probability. Non-negative, tends to 1 from below as
// T_half covers the packet's transit.
double povm_completeness(const MomentumWavePacket& packet, double x,
                         double T_half, const UnitsConfig& units,
                         const ArrivalOptions& opts = {});

// Same quantity for an ascending ladder of T_half values, evaluated as
// cumulative integrals on one shared grid (exactly monotone).
std::vector<double> povm_completeness_ladder(const MomentumWavePacket& packet,
                                             double x,
                                             std::span<const double> T_halves,
                                             const UnitsConfig& units,
                                             const ArrivalOptions& opts = {});

// Overlap of two arrival eigenstates <t x s 0|t' x s 0>, regularised by
// exp(-damping*E) in the energy integral. Nonzero for t != t' -- the
// eigenstates are not orthogonal, which is why the arrival measure is a POVM
// rather than a projector-valued one.
std::complex<double> time_eigenstate_overlap(double t, double t_prime,
                                             double damping);

}  // namespace toa
