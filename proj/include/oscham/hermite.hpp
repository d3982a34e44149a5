// hermite.hpp — stable evaluation of harmonic-oscillator eigenfunctions and
// the turning-point quantities attached to them.
//
// Conventions (used across the whole library):
//   * Modes are 1-based: h_m, m >= 1, eigenvalue lambda_m = 2m - 1 of the
//     operator -d^2/dx^2 + x^2, turning point X_m = sqrt(lambda_m).
//     h_1(x) = pi^{-1/4} e^{-x^2/2}; all h_m are L2-normalized and real.
//     (Equivalently h_m is the physicists' (m-1)-th eigenfunction; only the
//     1-based convention is exposed to prevent off-by-one drift.)
//   * zeta_m(x) = integral_{X_m}^x sqrt(lambda_m - t^2) dt for 0 <= x <= X_m
//     (nonpositive), and the evanescent companion
//     zeta_evanescent = integral_{X_m}^x sqrt(t^2 - lambda_m) dt >= 0 for x >= X_m.
//
// Evaluation is a scaled three-term recurrence: the iterate is carried as a
// (mantissa, base-2 exponent) pair renormalized every 32 steps, so there is no
// overflow/underflow for m up to at least 10^4 and |x| up to 2 X_m + 10.
// Forward recurrence is stable here because at fixed x the desired solution is
// the dominant one as the index grows (the evanescent deficit |zeta_m(x)|
// shrinks with m).

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "oscham/errors.hpp"

namespace oscham::hermite {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct OscillatorMode {
  int m = 1;              // 1-based index
  double lambda = 1.0;    // eigenvalue 2m - 1
  double turning_point = 1.0;  // X_m = sqrt(lambda)
};

// Checked constructor. Rejects m < 1.
OscillatorMode mode(int m);

// Eigenvalue 2m - 1 (rejects m < 1).
double eigenvalue(int m);

enum class RegimeTag { oscillatory, turning, evanescent };

struct EvalRegime {
  RegimeTag tag = RegimeTag::oscillatory;
  double half_width = 0.0;  // w > 0; |x| < X-w / within w of X / > X+w
};

// Classify |x| for mode m with half-width w (default: X_m^{-1/3}).
EvalRegime classify(int m, double x, double half_width = 0.0);

// Value h = mantissa * 2^exp2 with mantissa in [2^-200, 2^200] (or 0).
// Lets callers work far below the double underflow threshold.
struct ScaledValue {
  double mantissa = 0.0;
  std::int64_t exp2 = 0;

  double value() const {
    if (mantissa == 0.0) return 0.0;
    const std::int64_t e = exp2 < -3000 ? -3000 : (exp2 > 3000 ? 3000 : exp2);
    return std::ldexp(mantissa, static_cast<int>(e));
  }
  double log_abs() const;  // natural log of |h|; -inf if zero
};

// ---------------------------------------------------------------------------
// Eigenfunction evaluation
// ---------------------------------------------------------------------------

// h_m(x). Relative accuracy >= 10 significant digits for m <= 10^3 away from
// zeros; underflows honestly to 0 when |h_m(x)| < DBL_MIN.
double hermite_eval(int m, double x);

// Long-double instantiation (used by the extended-precision oracle and by
// tests probing magnitudes far below double range).
long double hermite_eval_ld(int m, long double x);

// Scaled result (never under/overflows internally).
ScaledValue hermite_eval_scaled(int m, double x);

// Both h_m(x) and h_n(x) from one recurrence pass.
void hermite_eval_pair(int m, int n, double x, double& hm, double& hn);

// One recurrence pass storing h_1..h_mmax(x) into out (size mmax).
void hermite_eval_all(int mmax, double x, double* out);

// Reusable evaluator holding the precomputed recurrence coefficients for a
// fixed pair (m, n); immutable after construction, safe to share across
// threads. This is the hot path of the oscillatory quadrature.
class PairEvaluator {
 public:
  PairEvaluator(int m, int n);
  void eval(double x, double& hm, double& hn) const;
  int m() const { return m_; }
  int n() const { return n_; }

 private:
  int m_, n_;
  std::vector<double> cx_;    // sqrt(2/(j+1))
  std::vector<double> cp_;    // sqrt(j/(j+1))
};

// ---------------------------------------------------------------------------
// Action integrals (closed forms; no quadrature)
// ---------------------------------------------------------------------------

// zeta_m(x) for 0 <= x <= X_m; zeta(m, X_m) = 0, zeta(m, 0) = -lambda pi / 4.
// Rejects x < 0 (domain error) and x > X_m (use zeta_evanescent).
double zeta(int m, double x);

// integral_{X_m}^x sqrt(t^2 - lambda) dt >= 0 for x >= X_m.
double zeta_evanescent(int m, double x);

// d/dx zeta_m = sqrt(lambda - x^2) on [0, X_m]; d/dx zeta_evanescent =
// sqrt(x^2 - lambda) on [X_m, inf).
double zeta_deriv(int m, double x);

// ---------------------------------------------------------------------------
// Turning-point (Langer) approximant
// ---------------------------------------------------------------------------

// Uniform approximant psi_1^(m)(x) built from the order-1/3 kernels of the
// action s = |zeta_m(x)|:
//   oscillatory side (x < X_m):  sqrt(s) (lambda-x^2)^{-1/4} e^{i pi/6} H^{(1)}_{1/3}(s)
//   evanescent side  (x > X_m):  (sqrt(s)/pi) (x^2-lambda)^{-1/4} K_{1/3}(s)  (real)
// The REAL PART approximates h_m(x) to relative O(1/lambda_m) away from the
// turning point; the modulus is the local envelope. The normalization is the
// unique one matching the WKB limit sqrt(2/pi)(lambda-x^2)^{-1/4} cos(s - pi/4).
//
// Throws TurningPointProximity when |x - X_m| < X_m^{-1/3}/8 (the approximant
// is not trustworthy inside the turning-point scale; use hermite_eval there).
std::complex<double> langer_psi1(int m, double x);

// Convenience bundle mirroring the approximant's ingredients.
struct LangerApproximant {
  OscillatorMode mode;
  double zeta = 0.0;   // signed: <= 0 oscillatory side, >= 0 evanescent side
  std::complex<double> value;
};

LangerApproximant langer(int m, double x);

}  // namespace oscham::hermite
