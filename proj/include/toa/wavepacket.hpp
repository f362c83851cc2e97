#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "toa/units.hpp"

namespace toa {

struct GaussianPacketParams {
  double q0 = 0.0;      // initial centre (enters only through the phase)
  double p0 = 0.0;      // mean momentum
  double sigma_p = 1.0; // momentum spread, > 0
};

// Initial state in the momentum representation. Gaussian packets carry the
// phase convention psi(p) = |psi(p)| * exp(-i p q0), so the packet centre is
// encoded purely in the phase slope. Tabulated packets interpolate real and
// imaginary parts linearly between samples and are zero outside the hull.
// Immutable after construction; all operations are pure.
class MomentumWavePacket {
 public:
  enum class Kind { gaussian, tabulated };

  static MomentumWavePacket gaussian(double q0, double p0, double sigma_p);
  static MomentumWavePacket tabulated(std::vector<double> p,
                                      std::vector<std::complex<double>> amp);

  Kind kind() const { return kind_; }
  std::complex<double> amplitude(double p) const;
  double abs2(double p) const;

  // Momentum window carrying all but <1e-14 of the norm: +-8 sigma around p0
  // for gaussians, the sample hull for tables.
  std::pair<double, double> support() const;

  // d arg(psi)/dp. Exactly -q0 for gaussians; a locally unwrapped finite
  // difference on the sample grid for tables.
  double phase_derivative(double p) const;

  const GaussianPacketParams* gaussian_params() const;

  const std::vector<double>& sample_momenta() const { return tab_p_; }
  const std::vector<std::complex<double>>& sample_amplitudes() const {
    return tab_amp_;
  }

 private:
  MomentumWavePacket() = default;

  Kind kind_ = Kind::gaussian;
  GaussianPacketParams gauss_;
  std::vector<double> tab_p_;
  std::vector<std::complex<double>> tab_amp_;
};

// Normalised gaussian packet (see class comment for the phase convention).
MomentumWavePacket gaussian_packet(double q0, double p0, double sigma_p);

// Integral of |psi(p)|^2. Gaussian packets are integrated by the module's
// quadrature over the support window; tabulated packets use the exact
// per-cell integral of the piecewise-linear interpolant.
double norm(const MomentumWavePacket& packet);

// Integral of |psi(p)|^2 over p < 0 -- the diagnostic for the right-mover
// approximations used by the barrier and quasi-classical formulas.
double negative_momentum_fraction(const MomentumWavePacket& packet);

}  // namespace toa
