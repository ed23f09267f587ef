#pragma once

#include <stdexcept>
#include <string>

namespace pushrec {

// Bad argument to an operation (wrong variant, non-finite input, out-of-range time).
struct RejectedInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A robot or simulation parameter violates its invariant.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A commanded input exceeds its bound; callers must clamp before the dynamics.
struct BoundViolation : std::domain_error {
  using std::domain_error::domain_error;
};

// The ZMP denominator vanished (free fall); no ZMP exists.
struct DegenerateLoad : std::domain_error {
  using std::domain_error::domain_error;
};

// A footstep plan violates a configured constraint.
struct PlanningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite value produced during integration.
struct NumericalBlowup : std::runtime_error {
  double time;
  NumericalBlowup(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
};

// An iterative solve exhausted its iteration budget.
struct NonConvergence : std::runtime_error {
  double residual;
  int iterations;
  NonConvergence(const std::string& what, double res, int iters)
      : std::runtime_error(what), residual(res), iterations(iters) {}
};

// Configuration text problem; carries the offending key and line (0 = cross-field check).
struct ConfigError : std::runtime_error {
  std::string key;
  int line;
  ConfigError(const std::string& what, std::string k, int ln)
      : std::runtime_error(what), key(std::move(k)), line(ln) {}
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pushrec
