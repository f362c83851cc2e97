#include <cstdlib>
#include <cstring>

#include "toa/errors.hpp"
#include "toa/kernels/phase_sum.hpp"

namespace toa::kernels {

namespace {

bool cpu_supports_avx2() {
#if defined(TOA_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect_isa() {
  if (const char* env = std::getenv("TOA_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && isa_available(Isa::avx2))
      return Isa::avx2;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_supports_avx2();
  }
  return false;
}

Isa best_isa() {
  static const Isa isa = detect_isa();
  return isa;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

void phase_weighted_sum(std::span<const double> freq,
                        std::span<const double> wre,
                        std::span<const double> wim,
                        std::span<const double> t,
                        std::span<std::complex<double>> out, Isa isa) {
  if (freq.size() != wre.size() || freq.size() != wim.size() ||
      t.size() != out.size())
    fail(ErrorKind::invalid_parameter, "phase_weighted_sum: span size mismatch");
  switch (isa) {
    case Isa::scalar:
      detail::phase_weighted_sum_scalar(freq, wre, wim, t, out);
      return;
    case Isa::avx2:
#if defined(TOA_HAVE_AVX2)
      detail::phase_weighted_sum_avx2(freq, wre, wim, t, out);
      return;
#else
      break;
#endif
  }
  detail::phase_weighted_sum_scalar(freq, wre, wim, t, out);
}

void phase_weighted_sum(std::span<const double> freq,
                        std::span<const double> wre,
                        std::span<const double> wim,
                        std::span<const double> t,
                        std::span<std::complex<double>> out) {
  phase_weighted_sum(freq, wre, wim, t, out, best_isa());
}

}  // namespace toa::kernels
