#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hchaos {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorKind {
  invalid_input,
  tangency,          // billiard ray grazing the boundary; no well-defined bounce
  non_convergence,   // iterative solver did not meet its tolerance
  step_underflow,    // adaptive integrator step fell below the floor
  branch_cut,        // step underflow close to a finite-time escape
  singular,          // singular linear system (e.g. parabolic det(M - 1))
  open_circuit,      // area circuit does not close
  itinerary_mismatch,
  unsupported,
  budget,            // manifold arclength budget unreachable
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::tangency: return "tangency";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::step_underflow: return "step_underflow";
    case ErrorKind::branch_cut: return "branch_cut";
    case ErrorKind::singular: return "singular";
    case ErrorKind::open_circuit: return "open_circuit";
    case ErrorKind::itinerary_mismatch: return "itinerary_mismatch";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::budget: return "budget";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Error raised while iterating a map; carries the index of the failing step.
class StepError : public Error {
 public:
  StepError(const Error& cause, std::size_t index)
      : Error(cause.kind(), std::string("step ") + std::to_string(index) + ": " + cause.what()),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Canonical pair in chart units.
struct PhasePoint {
  double q = 0.0;
  double p = 0.0;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

inline bool is_finite(const PhasePoint& x) { return std::isfinite(x.q) && std::isfinite(x.p); }

inline double distance(const PhasePoint& a, const PhasePoint& b) {
  return std::hypot(a.q - b.q, a.p - b.p);
}

/// x - floor(x) guarded so the result is always in [0, 1).
inline double wrap01(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

/// Wrap into [0, period).
inline double wrap_period(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

/// Signed difference a - b reduced to [-period/2, period/2).
inline double periodic_diff(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d >= 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

}  // namespace hchaos
