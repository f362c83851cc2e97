#pragma once

#include <complex>
#include <vector>

#include "toa/kernels/phase_sum.hpp"
#include "toa/numerics.hpp"

namespace toa {

// Precomputed terms of an arrival-amplitude scan: the amplitude at time t is
// sum_k weight_k * exp(-i * freq_k * t). Assembling the t-independent part
// once turns every time grid into a pure phase-sum kernel call.
struct ScanTerms {
  std::vector<double> freq;
  std::vector<double> wre;
  std::vector<double> wim;

  bool empty() const { return freq.empty(); }
  size_t size() const { return freq.size(); }

  void push(double frequency, std::complex<double> weight) {
    freq.push_back(frequency);
    wre.push_back(weight.real());
    wim.push_back(weight.imag());
  }

  std::complex<double> at(double t) const;

  // Evaluates the scan over many times, parallelised over grid chunks
  // (threads <= 0 uses the module default). Deterministic for any thread
  // count: each output element is an independent fixed-order sum.
  std::vector<std::complex<double>> evaluate(std::span<const double> t,
                                             int threads = 0) const;
  std::vector<std::complex<double>> evaluate(const TimeGrid& grid,
                                             int threads = 0) const;
};

}  // namespace toa
