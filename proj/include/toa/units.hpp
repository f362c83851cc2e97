#pragma once

#include "toa/errors.hpp"

namespace toa {

// hbar = 1 throughout; the particle mass is the only adjustable scale.
struct UnitsConfig {
  double mass = 1.0;

  void validate() const {
    if (!(mass > 0.0)) fail(ErrorKind::invalid_parameter, "mass must be > 0");
  }
};

}  // namespace toa
