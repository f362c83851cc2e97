#pragma once

#include <functional>
#include <string>

#include "toa/units.hpp"

namespace toa {

// Non-negative potential energy that vanishes for q <= 0. Used both by the
// quasi-classical arrival formulas and by the classical trajectory oracle.
struct SmoothPotential {
  std::function<double(double)> evaluate;            // V(q) >= 0, 0 for q <= 0
  std::function<double(double)> derivative;          // optional analytic V'(q)
  double support_end = 0.0;   // V negligible beyond this point
  double feature_width = 1.0; // smallest structure scale, sets trajectory steps
  std::string description;

  double operator()(double q) const { return q <= 0.0 ? 0.0 : evaluate(q); }

  double derivative_at(double q, double h = 1e-6) const;

  // Max of V over [a, b] from dense sampling.
  double max_on(double a, double b, int samples = 1024) const;
};

SmoothPotential zero_potential();

// V(q) = height * exp(-(q - center)^2 / (2 width^2)) restricted to q > 0.
// center/width must leave V and V' below 1e-12*height at the origin so the
// restriction stays smooth.
SmoothPotential gaussian_bump(double height, double center, double width);

// Local classical momentum p(q) = sqrt(2 m (E - V(q))). Throws a
// turning-point error when E <= V(q): the quasi-classical branch of this
// code never crosses turning points.
double local_momentum(double E, const SmoothPotential& potential, double q,
                      const UnitsConfig& units);

}  // namespace toa
