#include "toa/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>
#include <unordered_map>

namespace toa {

namespace {

constexpr int kPanelOrder = 16;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule compute_gauss_rule(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

const GaussRule& gauss_rule(int n) {
  static std::mutex mutex;
  static std::unordered_map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_rule(n)).first;
  return it->second;
}

std::atomic<int> g_max_threads{0};

int env_thread_default() {
  if (const char* env = std::getenv("TOA_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(lo < hi))
    fail(ErrorKind::invalid_parameter, "quadrature window must have lo < hi");
  if (points < 8)
    fail(ErrorKind::invalid_parameter, "quadrature needs at least 8 points");
}

void TimeGrid::validate() const {
  if (!(t_min < t_max))
    fail(ErrorKind::invalid_parameter, "time grid must have t_min < t_max");
  if (count < 2)
    fail(ErrorKind::invalid_parameter, "time grid needs at least 2 samples");
}

QuadratureNodes make_nodes(const QuadratureSpec& spec) {
  spec.validate();
  QuadratureNodes nodes;
  if (spec.rule == QuadratureSpec::Rule::trapezoid) {
    const int n = spec.points;
    const double h = spec.width() / (n - 1);
    nodes.x.resize(n);
    nodes.w.assign(n, h);
    for (int i = 0; i < n; ++i) nodes.x[i] = spec.lo + i * h;
    nodes.w.front() = 0.5 * h;
    nodes.w.back() = 0.5 * h;
    return nodes;
  }
  const int panels = (spec.points + kPanelOrder - 1) / kPanelOrder;
  const GaussRule& rule = gauss_rule(kPanelOrder);
  const double panel_width = spec.width() / panels;
  nodes.x.reserve(panels * kPanelOrder);
  nodes.w.reserve(panels * kPanelOrder);
  for (int p = 0; p < panels; ++p) {
    const double a = spec.lo + p * panel_width;
    const double mid = a + 0.5 * panel_width;
    const double scale = 0.5 * panel_width;
    for (int i = 0; i < kPanelOrder; ++i) {
      nodes.x.push_back(mid + scale * rule.x[i]);
      nodes.w.push_back(scale * rule.w[i]);
    }
  }
  return nodes;
}

int required_points(double max_frequency_hint, double window_width) {
  if (max_frequency_hint <= 0.0 || window_width <= 0.0) return 0;
  const double periods =
      max_frequency_hint * window_width / (2.0 * std::numbers::pi);
  return static_cast<int>(std::ceil(16.0 * periods));
}

std::complex<double> oscillatory_integral(
    const std::function<std::complex<double>(double)>& integrand,
    const QuadratureSpec& spec, double max_frequency_hint) {
  spec.validate();
  const int needed = required_points(max_frequency_hint, spec.width());
  if (spec.points < needed)
    fail(ErrorKind::resolution,
         "quadrature with " + std::to_string(spec.points) +
             " points cannot resolve the supplied frequency hint; at least " +
             std::to_string(needed) + " points are required");
  const QuadratureNodes nodes = make_nodes(spec);
  std::vector<std::complex<double>> terms(nodes.x.size());
  for (size_t i = 0; i < nodes.x.size(); ++i)
    terms[i] = nodes.w[i] * integrand(nodes.x[i]);
  return pairwise_sum(terms);
}

std::vector<double> unwrap_phase(
    std::span<const std::complex<double>> samples) {
  std::vector<double> phase(samples.size());
  if (samples.empty()) return phase;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double prev_raw = std::arg(samples[0]);
  long long turns = 0;
  if (prev_raw <= -std::numbers::pi) turns = 1;  // map -pi to +pi
  phase[0] = prev_raw + turns * two_pi;
  for (size_t i = 1; i < samples.size(); ++i) {
    const double raw = std::arg(samples[i]);
    const double jump = raw - prev_raw;
    turns -= std::llround(jump / two_pi);
    const double unwrapped = raw + turns * two_pi;
    const double step = unwrapped - phase[i - 1];
    if (std::abs(step) >= std::numbers::pi * (1.0 - 1e-12))
      fail(ErrorKind::aliasing,
           "phase jump of " + std::to_string(step) + " rad at sample " +
               std::to_string(i) + "; grid too coarse to unwrap");
    phase[i] = unwrapped;
    prev_raw = raw;
  }
  return phase;
}

double derivative(const std::function<double(double)>& f, double at,
                  double h) {
  if (!(h > 0.0))
    fail(ErrorKind::invalid_parameter, "derivative step must be > 0");
  return (f(at + h) - f(at - h)) / (2.0 * h);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
  if (!(lo < hi)) fail(ErrorKind::invalid_parameter, "bracket must have lo < hi");
  if (!(tol > 0.0)) fail(ErrorKind::invalid_parameter, "tolerance must be > 0");
  double fa = f(lo), fb = f(hi);
  if (fa == 0.0) return lo;
  if (fb == 0.0) return hi;
  if ((fa > 0.0) == (fb > 0.0))
    fail(ErrorKind::bracket, "no sign change over the root bracket");
  double a = lo, b = hi;
  for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
    // Secant proposal, falling back to bisection when it leaves the bracket.
    double c = b - fb * (b - a) / (fb - fa);
    const double margin = 0.01 * (b - a);
    if (!(c > a + margin) || !(c < b - margin)) c = 0.5 * (a + b);
    const double fc = f(c);
    if (fc == 0.0) return c;
    if ((fc > 0.0) == (fa > 0.0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
      fb = fc;
    }
  }
  return 0.5 * (a + b);
}

namespace {

template <typename T>
T pairwise_sum_impl(std::span<const T> values) {
  if (values.size() <= 16) {
    T sum{};
    for (const T& v : values) sum += v;
    return sum;
  }
  const size_t half = values.size() / 2;
  return pairwise_sum_impl(values.subspan(0, half)) +
         pairwise_sum_impl(values.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values);
}

std::complex<double> pairwise_sum(
    std::span<const std::complex<double>> values) {
  return pairwise_sum_impl(values);
}

double trapezoid(std::span<const double> samples, double dx) {
  if (samples.size() < 2)
    fail(ErrorKind::invalid_parameter, "trapezoid needs at least 2 samples");
  double sum = 0.5 * (samples.front() + samples.back());
  std::vector<double> interior(samples.begin() + 1, samples.end() - 1);
  sum += pairwise_sum(interior);
  return sum * dx;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = max_threads();
  threads = std::min(threads, n);
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  std::atomic<int> next{0};
  constexpr int kChunk = 8;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const int begin = next.fetch_add(kChunk);
        if (begin >= n) return;
        const int end = std::min(begin + kChunk, n);
        for (int i = begin; i < end; ++i) fn(i);
      }
    });
  }
  for (auto& w : workers) w.join();
}

void set_max_threads(int threads) {
  g_max_threads.store(std::max(1, threads));
}

int max_threads() {
  int n = g_max_threads.load();
  if (n == 0) {
    n = env_thread_default();
    g_max_threads.store(n);
  }
  return n;
}

}  // namespace toa
