#include <cmath>

#include "toa/kernels/phase_sum.hpp"

namespace toa::kernels::detail {

// Reference kernel. Plain libm evaluation, one term at a time; every SIMD
// variant is equivalence-tested against this.
void phase_weighted_sum_scalar(std::span<const double> freq,
                               std::span<const double> wre,
                               std::span<const double> wim,
                               std::span<const double> t,
                               std::span<std::complex<double>> out) {
  const size_t n = freq.size();
  for (size_t j = 0; j < t.size(); ++j) {
    const double tj = t[j];
    double acc_re = 0.0, acc_im = 0.0;
    for (size_t k = 0; k < n; ++k) {
      const double phase = freq[k] * tj;
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      // (wre + i*wim) * (cos - i*sin)
      acc_re += wre[k] * c + wim[k] * s;
      acc_im += wim[k] * c - wre[k] * s;
    }
    out[j] = {acc_re, acc_im};
  }
}

}  // namespace toa::kernels::detail
