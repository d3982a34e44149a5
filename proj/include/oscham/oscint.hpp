// oscint.hpp — oscillatory matrix elements of perturbed oscillator modes.
//
// Computes I(m, n; k, beta, mu) = ∫_R <x>^mu e^{i k |x|^beta} h_m(x) h_n(x) dx
// with a certified absolute-error estimate.  The positive half-line is split
// at curvature/turning-point landmarks, oscillatory stretches are pre-split
// so each seed panel holds a bounded number of waves, a globally adaptive
// Gauss–Kronrod pass refines to tolerance, and the far tail is closed by an
// analytic envelope bound.  A stationary-phase profile and a van der Corput
// bound checker are provided to audit the integrand's phase assumptions.

#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "oscham/errors.hpp"

namespace oscham::oscint {

// ---------------------------------------------------------------- queries

/// Query for one matrix element I(m, n; k, beta, mu).
struct OscIntegralQuery {
  int m = 1;          ///< row mode index (1-based)
  int n = 1;          ///< column mode index (1-based)
  double k = 1.0;     ///< oscillation strength, k != 0
  double beta = 2.0;  ///< phase power, beta > 1
  double mu = 0.0;    ///< weight exponent in <x>^mu = (1+x^2)^{mu/2}, mu >= 0
};

/// Throws ValidationError unless m,n >= 1, k nonzero finite, beta > 1 finite,
/// and mu >= 0 finite.
void validate(const OscIntegralQuery& q);

// ---------------------------------------------------------------- results

/// One panel of the final decomposition, as reported to callers.
struct PanelRecord {
  double a = 0.0;      ///< panel start (positive half-line)
  double b = 0.0;      ///< panel end
  std::string method;  ///< "gk-core", "gk-osc" or "tail-bound"
  double error = 0.0;  ///< certified contribution to the error estimate
};

struct MatrixElementResult {
  std::complex<double> value{0.0, 0.0};
  double abs_error_estimate = 0.0;  ///< >= sum of per-panel errors
  std::vector<PanelRecord> panels;
};

inline constexpr double kDefaultTol = 1e-10;

struct MatrixElementOptions {
  double abs_tol = kDefaultTol;
  double x_end_hint = 0.0;         ///< if > 0, lower bound for the far cutoff
  std::size_t max_panels = 40000;  ///< adaptive refinement budget
  bool record_panels = true;       ///< fill MatrixElementResult::panels
};

/// Computes I(m, n; k, beta, mu).  Exact zeros (odd m+n) return immediately
/// with a zero error estimate.  On success the estimate satisfies
/// abs_error_estimate <= max(abs_tol, 1e-8 |value|); if the panel budget runs
/// out first, ToleranceNotMet carries the best value and estimate achieved.
MatrixElementResult matrix_element(const OscIntegralQuery& q,
                                   double abs_tol = kDefaultTol);
MatrixElementResult matrix_element(const OscIntegralQuery& q,
                                   const MatrixElementOptions& opt);

/// Extended-precision twin of matrix_element: identical panel plan, long
/// double integrand and accumulation, default tolerance 1e-4 times tighter.
/// Used to certify the double-precision path's error estimates.
struct MatrixElementResultLd {
  std::complex<long double> value{0.0L, 0.0L};
  double abs_error_estimate = 0.0;
};
MatrixElementResultLd matrix_element_ld(const OscIntegralQuery& q,
                                        double abs_tol = kDefaultTol * 1e-4);

// ---------------------------------------------------------------- phase

/// Derivative profile of the principal (difference-channel) phase
///   Phi(x) = k x^beta + zeta_m(x) - zeta_n(x),   m <= n,
/// whose derivative g(x) = k beta x^{beta-1} + sqrt(lambda_m - x^2)
/// - sqrt(lambda_n - x^2) controls stationary points on [0, X_m]: for k > 0
/// this is the channel in which the power phase can balance the beat phase
/// (for m = n it gives the single stationary point x = 0).
struct PhaseProfile {
  int m = 1, n = 1;
  double k = 1.0, beta = 2.0;
  double lambda_m = 1.0, lambda_n = 1.0;
  double turning_point_m = 1.0;  ///< X_m, the smaller turning point

  double g(double x) const;    ///< Phi'
  double dg(double x) const;   ///< Phi''
  double d2g(double x) const;  ///< Phi'''

  /// Roots of g on [0, X_m], bisected to 1e-12 * max(1, X_m).
  std::vector<double> stationary_points;
};

/// Requires m <= n (ValidationError otherwise; swap before calling).
PhaseProfile phase_profile(int m, int n, double k, double beta);

// ---------------------------------------------------------------- vdC bound

/// Pinned van der Corput constants for orders 1..3: {3, 10, 30}.  The
/// classical constants are {3, 8, 18}; orders 2 and 3 are held conservative.
double vdc_constant(int order);

struct VdcReport {
  double lhs = 0.0;           ///< |∫_a^b psi e^{i Phi} dx|
  double rhs = 0.0;           ///< c_k lambda^{-1/k} (|psi(b)| + ∫_a^b |psi'|)
  double lambda_scale = 0.0;  ///< extracted scale: min sampled |Phi^{(k)}|
  bool pass = false;          ///< lhs <= rhs
};

/// Low-level checker.  `phi` is the raw phase, `dkphi` its order-th
/// derivative, `psi`/`dpsi` the complex amplitude and its derivative.  The
/// oscillation scale is extracted as the minimum of |Phi^{(order)}| over 401
/// equispaced samples, so the normalized phase satisfies |phi^{(order)}| >= 1
/// at the samples; AssumptionViolated if that minimum is not positive, or
/// (order 1) if the sampled Phi' is not monotone.
VdcReport vdc_bound_check(const std::function<double(double)>& phi,
                          const std::function<double(double)>& dkphi,
                          const std::function<std::complex<double>(double)>& psi,
                          const std::function<std::complex<double>(double)>& dpsi,
                          double a, double b, int order);

/// Oscillatory channels of the product h_m h_n in the WKB window: the fast
/// phases obtained from cos(s_m - pi/4) cos(s_n - pi/4) with s_j = -zeta_j.
enum class PhaseChannel {
  difference,  ///< Phi = k x^beta + zeta_m - zeta_n
  sum,         ///< Phi = k x^beta - zeta_m - zeta_n
};

/// Query-level audit: forms the channel phase and the channel amplitude
///   psi(x) = (2 pi)^{-1} <x>^mu (lambda_m - x^2)^{-1/4} (lambda_n - x^2)^{-1/4}
/// on [a, b], which must satisfy 0 < a < b <= X_m - X_m^{-1/3} (ValidationError
/// otherwise), and applies the low-level bound with analytic derivatives.
VdcReport vdc_bound_check(const OscIntegralQuery& q, double a, double b,
                          int order, PhaseChannel channel = PhaseChannel::difference);

}  // namespace oscham::oscint
