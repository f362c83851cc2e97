#pragma once

#include <complex>
#include <span>
#include <string_view>

namespace toa::kernels {

// Kernel variants. `scalar` is the reference implementation (libm sin/cos);
// SIMD variants must agree with it to ~1e-12 relative and are selected at
// runtime from CPU features. The TOA_KERNEL environment variable (values
// "scalar" or "avx2") overrides detection, e.g. for equivalence testing.
enum class Isa { scalar, avx2 };

Isa best_isa();
std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

// out[j] = sum_k (wre[k] + i*wim[k]) * exp(-i * freq[k] * t[j])
//
// This is the inner loop of every arrival-density scan: the weights hold
// everything t-independent (quadrature weight, sqrt(p) factor, spatial and
// packet phases, transmission amplitude), freq holds the kinetic energies.
void phase_weighted_sum(std::span<const double> freq,
                        std::span<const double> wre,
                        std::span<const double> wim,
                        std::span<const double> t,
                        std::span<std::complex<double>> out, Isa isa);

// Dispatching overload: uses best_isa().
void phase_weighted_sum(std::span<const double> freq,
                        std::span<const double> wre,
                        std::span<const double> wim,
                        std::span<const double> t,
                        std::span<std::complex<double>> out);

namespace detail {

void phase_weighted_sum_scalar(std::span<const double> freq,
                               std::span<const double> wre,
                               std::span<const double> wim,
                               std::span<const double> t,
                               std::span<std::complex<double>> out);

#if defined(TOA_HAVE_AVX2)
void phase_weighted_sum_avx2(std::span<const double> freq,
                             std::span<const double> wre,
                             std::span<const double> wim,
                             std::span<const double> t,
                             std::span<std::complex<double>> out);
#endif

}  // namespace detail

}  // namespace toa::kernels
