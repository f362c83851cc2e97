#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "toa/arrival_free.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

namespace toa {

// Rectangular barrier of the given height on [start, start + width]. The
// transmission amplitude is translation invariant (only reflection picks up
// a phase from `start`), so `start` enters through geometry checks alone.
struct SquareBarrier {
  double height = 0.0;
  double width = 1.0;
  double start = 0.0;

  void validate() const;
  double end() const { return start + width; }
  // p_V = sqrt(2 m V); always recomputed, never cached.
  double threshold_momentum(const UnitsConfig& units) const;
};

struct TransmissionResult {
  std::complex<double> T;
  std::complex<double> R;   // from the same interface matching; |T|^2+|R|^2=1
  double phase = 0.0;       // principal arg T at this momentum
  double wigner_phase_derivative = 0.0;  // d arg T / dp
};

// Closed-form transmission/reflection at momentum p > 0. Below threshold the
// evaluation uses the real hyperbolic branch; within 1e-8*p_V of threshold a
// power series in (p' a)^2 keeps both sides continuous.
TransmissionResult transmission(double p, const SquareBarrier& barrier,
                                const UnitsConfig& units);

// d arg T/dp by locally unwrapped central differences on a small stencil.
// The step shrinks automatically near resonances; if the phase still aliases
// the error of that name is raised.
double wigner_phase_derivative(double p, const SquareBarrier& barrier,
                               const UnitsConfig& units);

// T and continuously unwrapped arg T along an ascending momentum grid.
struct TransmissionScan {
  std::vector<double> p;
  std::vector<std::complex<double>> T;
  std::vector<double> phase;  // unwrapped along the grid
};
TransmissionScan transmission_scan(std::span<const double> p,
                                   const SquareBarrier& barrier,
                                   const UnitsConfig& units);

struct BarrierOptions {
  ArrivalOptions arrival;
  double negative_momentum_limit = 1e-6;
};

// Far-side arrival amplitude: the free right-mover amplitude with each
// momentum component filtered by T(p). Valid for detection beyond the
// barrier and packets prepared on the left with negligible negative-momentum
// content; violations raise domain errors naming the assumption.
std::complex<double> transmitted_arrival_amplitude(
    const MomentumWavePacket& packet, double x, const SquareBarrier& barrier,
    double t, const UnitsConfig& units, const BarrierOptions& opts = {});

// Probability of ever arriving beyond the barrier: momentum integral of
// |T(p) psi(p)|^2 (independent of x past the barrier).
double transmitted_arrival_probability(const MomentumWavePacket& packet,
                                       const SquareBarrier& barrier,
                                       const UnitsConfig& units,
                                       const BarrierOptions& opts = {});

// Normalised far-side time density on an explicit grid.
ArrivalDistribution transmitted_arrival_distribution(
    const MomentumWavePacket& packet, double x, const SquareBarrier& barrier,
    const TimeGrid& grid, const UnitsConfig& units,
    const BarrierOptions& opts = {});

// Window placed from the |T psi|^2-filtered momentum statistics and the
// transmitted classical time; tunneling reshapes the packet, so the free
// window would miss the density.
TimeGrid transmitted_time_window(const MomentumWavePacket& packet, double x,
                                 const SquareBarrier& barrier,
                                 const UnitsConfig& units, double sigmas = 10.0,
                                 int count = 2001,
                                 const BarrierOptions& opts = {});

// Mean far-side arrival time: Wigner phase time averaged over the
// transmitted state,
//   (1/P) Int dp |T psi|^2 (m/p) (x - q0 + d arg T/dp).
double mean_transmitted_arrival(const MomentumWavePacket& packet, double x,
                                const SquareBarrier& barrier,
                                const UnitsConfig& units,
                                const BarrierOptions& opts = {});

// Same mean from the first moment of the far-side time density; the two
// routes agree to ~1e-3 relative for right-mover packets.
double mean_transmitted_arrival_moment_route(const MomentumWavePacket& packet,
                                             double x,
                                             const SquareBarrier& barrier,
                                             const UnitsConfig& units,
                                             const BarrierOptions& opts = {});

struct HartmanPoint {
  double width = 0.0;
  double mean_time = 0.0;
  double advancement = 0.0;  // mean_time - free mean over the same flight
};

struct HartmanScanResult {
  std::vector<HartmanPoint> points;
  double free_mean = 0.0;
  // First pair of adjacent widths where the advancement changes sign.
  std::optional<std::pair<double, double>> crossover_bracket;
  int sign_changes = 0;
};

// Advancement versus barrier width at fixed height: negative in the
// tunneling-dominated (Hartman) regime, turning positive once the barrier is
// thick enough that only filtered above-threshold components survive.
HartmanScanResult hartman_scan(const MomentumWavePacket& packet, double x,
                               double height, std::span<const double> widths,
                               const UnitsConfig& units,
                               const BarrierOptions& opts = {});

}  // namespace toa
