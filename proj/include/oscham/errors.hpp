// errors.hpp — exception hierarchy shared by all oscham modules.
//
// Two top-level families matter to callers (and to the CLI exit-code map):
//   ValidationError — a precondition on inputs was violated (CLI exit 2)
//   NumericalError  — an algorithm could not meet its numeric contract (CLI exit 3)

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oscham {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition violations: bad mode index, beta <= 1, mu outside its window, ...
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Numeric-contract failures: tolerance not met, divisor too small, divergence.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// Adaptive quadrature exhausted its subdivision budget; carries the best
// achieved value and error estimate so callers can decide to accept anyway.
class ToleranceNotMet : public NumericalError {
 public:
  ToleranceNotMet(const std::string& what, std::complex<double> best_value,
                  double best_error)
      : NumericalError(what), value(best_value), abs_error(best_error) {}
  std::complex<double> value;
  double abs_error;
};

// The uniform turning-point approximant is unreliable within the exclusion
// window |x - X_m| < X_m^{-1/3}/8; callers must use the recurrence there.
class TurningPointProximity : public ValidationError {
 public:
  explicit TurningPointProximity(const std::string& what) : ValidationError(what) {}
};

// A homological divisor fell below the screening threshold despite the
// nonresonance screen; names the offending (j, a, b).
class SmallDivisorError : public NumericalError {
 public:
  SmallDivisorError(const std::string& what, long harmonic, int row, int col,
                    double divisor_value)
      : NumericalError(what), harmonic(harmonic), a(row), b(col), divisor(divisor_value) {}
  long harmonic;
  int a;
  int b;
  double divisor;
};

// The frequency vector failed the Melnikov nonresonance screen at the current
// (kappa, cutoff) pair; names the witnessing angle harmonic k and integer j.
class ResonanceError : public NumericalError {
 public:
  ResonanceError(const std::string& what, std::vector<int> angle_harmonic, long j,
                 double divisor_value)
      : NumericalError(what),
        k(std::move(angle_harmonic)),
        j(j),
        divisor(divisor_value) {}
  std::vector<int> k;
  long j;
  double divisor;
};

// The normal-form iteration stopped making progress (size grew twice in a row).
class DivergenceError : public NumericalError {
 public:
  explicit DivergenceError(const std::string& what) : NumericalError(what) {}
};

// A sampled hypothesis (e.g. a phase-derivative lower bound) failed to hold.
class AssumptionViolated : public ValidationError {
 public:
  explicit AssumptionViolated(const std::string& what) : ValidationError(what) {}
};

}  // namespace oscham
