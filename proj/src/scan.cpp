#include "toa/scan.hpp"

#include <algorithm>

namespace toa {

std::complex<double> ScanTerms::at(double t) const {
  std::complex<double> out;
  kernels::phase_weighted_sum(freq, wre, wim, {&t, 1}, {&out, 1});
  return out;
}

std::vector<std::complex<double>> ScanTerms::evaluate(std::span<const double> t,
                                                      int threads) const {
  std::vector<std::complex<double>> out(t.size());
  if (empty()) return out;
  if (threads <= 0) threads = max_threads();
  const int n = static_cast<int>(t.size());
  const int chunk = std::max(64, (n + threads - 1) / threads);
  const int chunks = (n + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](int c) {
    const int begin = c * chunk;
    const int end = std::min(begin + chunk, n);
    kernels::phase_weighted_sum(
        freq, wre, wim, t.subspan(begin, end - begin),
        std::span<std::complex<double>>(out).subspan(begin, end - begin));
  });
  return out;
}

std::vector<std::complex<double>> ScanTerms::evaluate(const TimeGrid& grid,
                                                      int threads) const {
  grid.validate();
  std::vector<double> t(grid.count);
  for (int i = 0; i < grid.count; ++i) t[i] = grid.at(i);
  return evaluate(t, threads);
}

}  // namespace toa
