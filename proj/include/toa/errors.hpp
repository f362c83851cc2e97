#pragma once

#include <stdexcept>
#include <string>

namespace toa {

// Failure categories. The CLI maps these onto exit codes: validation and
// invalid_parameter exit with 2, io with 3, every numerical kind with 4.
enum class ErrorKind {
  invalid_parameter,
  validation,
  resolution,           // quadrature cannot resolve the requested oscillation
  aliasing,             // phase samples jump by >= pi between grid points
  bracket,              // root bracket has no sign change
  turning_point,        // classically forbidden region entered
  domain,               // argument outside the formula's validity domain
  window_truncation,    // time window cuts off too much probability mass
  degenerate_ensemble,  // every ensemble draw failed to arrive
  integration,          // trajectory step too large for the drift bound
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace toa
