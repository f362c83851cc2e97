#pragma once

// Independent reference computations for the test suites. Everything here is
// deliberately written against the library's production paths: plain Simpson
// quadrature instead of the Gauss panels, interface-matching transfer
// matrices instead of the closed-form transmission, and closed-form phase
// derivatives instead of finite differences.

#include <complex>
#include <functional>
#include <vector>

#include "toa/wavepacket.hpp"

namespace oracles {

// Composite Simpson rule; n is rounded up to the next even interval count.
double simpson(const std::function<double(double)>& f, double a, double b,
               int n = 2000);

std::complex<double> simpson_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int n = 2000);

// E[f(p)] under the normal density N(p0, sigma^2), integrated over +-10
// sigma (clipped to p > p_floor when requested).
double gaussian_expectation(const std::function<double(double)>& f, double p0,
                            double sigma, double p_floor = -1e300);

// Numerical transfer-matrix solution of the stationary scattering problem
// for a piecewise-constant sampling of V on [x_lo, x_hi] with `slabs`
// slices. Returns the transmitted and reflected amplitudes for a unit wave
// incident from the left with momentum p.
struct Scattering {
  std::complex<double> T;
  std::complex<double> R;
};
Scattering transfer_matrix(double p, const std::function<double(double)>& V,
                           double x_lo, double x_hi, int slabs, double mass);

// d arg T / dp for the rectangular barrier from the closed-form derivative
// of the matching denominator (complex branch below threshold).
double wigner_phase_derivative_analytic(double p, double height, double width,
                                        double mass);

// Tabulated copy of a packet on a uniform n-point grid over [lo, hi], with
// an optional amplitude scale and extra momentum-dependent phase.
toa::MomentumWavePacket tabulated_copy(
    const toa::MomentumWavePacket& packet, int n, double lo, double hi,
    double scale = 1.0,
    const std::function<double(double)>& extra_phase = nullptr);

}  // namespace oracles
