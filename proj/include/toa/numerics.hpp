#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "toa/errors.hpp"

namespace toa {

// Quadrature window and rule for the momentum/energy integrals. The
// composite Gauss rule is open (no endpoint nodes), so integrable endpoint
// factors like sqrt(p) or 1/p at p -> 0 are never evaluated at the edge.
struct QuadratureSpec {
  enum class Rule { composite_gauss, trapezoid };

  Rule rule = Rule::composite_gauss;
  int points = 256;  // total nodes, >= 8
  double lo = 0.0;
  double hi = 1.0;

  void validate() const;
  double width() const { return hi - lo; }
};

// Uniform time grid for arrival densities.
struct TimeGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  int count = 2;

  void validate() const;
  double dt() const { return (t_max - t_min) / (count - 1); }
  double at(int i) const { return t_min + i * dt(); }
};

struct QuadratureNodes {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes and weights on [spec.lo, spec.hi] for the requested rule.
QuadratureNodes make_nodes(const QuadratureSpec& spec);

// Node count that keeps at least 16 points per period of exp(i*f*x) across a
// window of the given width, for the fastest frequency |f| present.
int required_points(double max_frequency_hint, double window_width);

// Quadrature of a complex integrand over spec's window. When a positive
// frequency hint is supplied and spec.points cannot resolve it, throws a
// resolution error naming the required point count.
std::complex<double> oscillatory_integral(
    const std::function<std::complex<double>(double)>& integrand,
    const QuadratureSpec& spec, double max_frequency_hint = 0.0);

// Continuous phase of a complex sample sequence. The output differs from
// atan2 by an exact integer multiple of 2*pi at every sample and starts in
// (-pi, pi]. Adjacent samples whose phase still jumps by >= pi raise an
// aliasing error: the grid is too coarse to unwrap.
std::vector<double> unwrap_phase(std::span<const std::complex<double>> samples);

// Central difference (f(at+h) - f(at-h)) / (2h).
double derivative(const std::function<double(double)>& f, double at, double h);

// Root of f on [lo, hi] by a bisection/secant hybrid. The bracket must
// change sign; the result is located to within tol.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

// Order-independent pairwise summation.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

// Trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> samples, double dx);

// Runs fn(i) for i in [0, n). Results must not depend on execution order;
// with threads <= 1 the loop is serial.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

// Process-wide worker cap used when callers pass 0 threads. Initialised from
// the TOA_THREADS environment variable (default 1).
void set_max_threads(int threads);
int max_threads();

}  // namespace toa
