#include "toa/potential.hpp"

#include <algorithm>
#include <cmath>

namespace toa {

double SmoothPotential::derivative_at(double q, double h) const {
  if (derivative) return q <= 0.0 ? 0.0 : derivative(q);
  return ((*this)(q + h) - (*this)(q - h)) / (2.0 * h);
}

double SmoothPotential::max_on(double a, double b, int samples) const {
  if (b < a) std::swap(a, b);
  double vmax = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double q = a + (b - a) * i / samples;
    vmax = std::max(vmax, (*this)(q));
  }
  return vmax;
}

SmoothPotential zero_potential() {
  SmoothPotential v;
  v.evaluate = [](double) { return 0.0; };
  v.derivative = [](double) { return 0.0; };
  v.support_end = 0.0;
  v.feature_width = 1.0;
  v.description = "free";
  return v;
}

SmoothPotential gaussian_bump(double height, double center, double width) {
  if (!(height >= 0.0) || !(width > 0.0) || !(center > 0.0))
    fail(ErrorKind::invalid_parameter,
         "gaussian bump requires height >= 0, width > 0, center > 0");
  const auto value = [height, center, width](double q) {
    const double u = (q - center) / width;
    return height * std::exp(-0.5 * u * u);
  };
  if (height > 0.0) {
    const double v0 = value(0.0);
    const double d0 = std::abs(v0 * center / (width * width));
    if (v0 > 1e-12 * height || d0 > 1e-12 * height)
      fail(ErrorKind::invalid_parameter,
           "gaussian bump is not negligible at the origin; move the center "
           "further right or narrow the width");
  }
  SmoothPotential v;
  v.evaluate = [value](double q) { return q <= 0.0 ? 0.0 : value(q); };
  v.derivative = [height, center, width](double q) {
    if (q <= 0.0) return 0.0;
    const double u = (q - center) / width;
    return -height * u / width * std::exp(-0.5 * u * u);
  };
  v.support_end = center + 12.0 * width;
  v.feature_width = width;
  v.description = "gaussian_bump";
  return v;
}

double local_momentum(double E, const SmoothPotential& potential, double q,
                      const UnitsConfig& units) {
  units.validate();
  const double v = potential(q);
  if (!(E > v))
    fail(ErrorKind::turning_point,
         "E = " + std::to_string(E) + " does not exceed V(" +
             std::to_string(q) + ") = " + std::to_string(v) +
             "; classically forbidden");
  return std::sqrt(2.0 * units.mass * (E - v));
}

}  // namespace toa
