#include "oscham/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oscham/bessel.hpp"

namespace oscham::hermite {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338328L;
constexpr long double kQuarterRootPiInv = 0.751125544464942482858703004776228L;  // pi^{-1/4}
constexpr long double kLog2E = 1.44269504088896340735992468100189L;

void require_mode(int m) {
  if (m < 1) throw ValidationError("mode index must be >= 1, got " + std::to_string(m));
}

void require_finite(double x) {
  if (!std::isfinite(x)) throw ValidationError("x must be finite");
}

// ---------------------------------------------------------------------------
// Scaled three-term recurrence.
//
// psi_0 = pi^{-1/4} e^{-x^2/2}, psi_n = x sqrt(2/n) psi_{n-1} - sqrt((n-1)/n) psi_{n-2};
// h_m = psi_{m-1}. The iterate is (mantissa, exp2); every 32 steps the pair is
// rescaled into a moderate binade. Sink receives (m, mantissa, exp2).
// ---------------------------------------------------------------------------

template <class Real, class Sink>
void recurrence(int mmax, Real x, Sink&& sink) {
  const Real eref = -x * x / 2 * static_cast<Real>(kLog2E);  // e^{-x^2/2} = 2^eref
  const Real efloor = std::floor(eref);
  std::int64_t e2 = static_cast<std::int64_t>(efloor);
  Real v = static_cast<Real>(kQuarterRootPiInv) * std::exp2(eref - efloor);
  Real vprev = 0;
  sink(1, v, e2);
  for (int n = 1; n < mmax; ++n) {
    const Real vnext = x * std::sqrt(Real(2) / Real(n)) * v -
                       std::sqrt(Real(n - 1) / Real(n)) * vprev;
    vprev = v;
    v = vnext;
    sink(n + 1, v, e2);
    if ((n & 31) == 0) {
      int ex = 0;
      (void)std::frexp(static_cast<double>(std::max(std::abs(v), std::abs(vprev))), &ex);
      if (ex > 200 || ex < -200) {
        const Real scale = std::exp2(Real(-ex));
        v *= scale;
        vprev *= scale;
        e2 += ex;
      }
    }
  }
}

double assemble(double mantissa, std::int64_t e2) {
  if (mantissa == 0.0) return 0.0;
  const std::int64_t e = std::clamp<std::int64_t>(e2, -3000, 3000);
  return std::ldexp(mantissa, static_cast<int>(e));
}

long double assemble_ld(long double mantissa, std::int64_t e2) {
  if (mantissa == 0.0L) return 0.0L;
  const std::int64_t e = std::clamp<std::int64_t>(e2, -20000, 20000);
  return std::ldexp(mantissa, static_cast<int>(e));
}

// t - sin(2t)/2 (osc = true) or sinh(2t)/2 - t (osc = false), computed by the
// odd series sum_{j>=3 odd} (+-)(2t)^j/(2 j!) for t < 1 to dodge cancellation.
template <bool Osc>
double action_kernel(double t) {
  if (t >= 1.0) return Osc ? t - std::sin(2.0 * t) / 2.0 : std::sinh(2.0 * t) / 2.0 - t;
  const long double u = 2.0L * t;
  long double term = u * u * u / 12.0L;  // j = 3
  long double sum = term;
  for (int j = 3; j < 60; j += 2) {
    term *= u * u / ((j + 1.0L) * (j + 2.0L));
    if constexpr (Osc) term = -term;
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

OscillatorMode mode(int m) {
  require_mode(m);
  const double lambda = 2.0 * m - 1.0;
  return {m, lambda, std::sqrt(lambda)};
}

double eigenvalue(int m) {
  require_mode(m);
  return 2.0 * m - 1.0;
}

EvalRegime classify(int m, double x, double half_width) {
  const OscillatorMode md = mode(m);
  require_finite(x);
  double w = half_width;
  if (w <= 0.0) w = std::pow(md.turning_point, -1.0 / 3.0);
  const double ax = std::abs(x);
  if (ax < md.turning_point - w) return {RegimeTag::oscillatory, w};
  if (ax > md.turning_point + w) return {RegimeTag::evanescent, w};
  return {RegimeTag::turning, w};
}

double ScaledValue::log_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + static_cast<double>(exp2) * 0.6931471805599453094;
}

// ---------------------------------------------------------------------------
// Eigenfunction evaluation
// ---------------------------------------------------------------------------

double hermite_eval(int m, double x) {
  require_mode(m);
  require_finite(x);
  double out = 0.0;
  recurrence<double>(m, x, [&](int j, double v, std::int64_t e2) {
    if (j == m) out = assemble(v, e2);
  });
  return out;
}

long double hermite_eval_ld(int m, long double x) {
  require_mode(m);
  long double out = 0.0L;
  recurrence<long double>(m, x, [&](int j, long double v, std::int64_t e2) {
    if (j == m) out = assemble_ld(v, e2);
  });
  return out;
}

ScaledValue hermite_eval_scaled(int m, double x) {
  require_mode(m);
  require_finite(x);
  ScaledValue out;
  recurrence<double>(m, x, [&](int j, double v, std::int64_t e2) {
    if (j == m) out = {v, e2};
  });
  return out;
}

void hermite_eval_pair(int m, int n, double x, double& hm, double& hn) {
  require_mode(m);
  require_mode(n);
  require_finite(x);
  double vm = 0.0, vn = 0.0;
  recurrence<double>(std::max(m, n), x, [&](int j, double v, std::int64_t e2) {
    if (j == m) vm = assemble(v, e2);
    if (j == n) vn = assemble(v, e2);
  });
  hm = vm;
  hn = vn;
}

void hermite_eval_all(int mmax, double x, double* out) {
  require_mode(mmax);
  require_finite(x);
  recurrence<double>(mmax, x, [&](int j, double v, std::int64_t e2) {
    out[j - 1] = assemble(v, e2);
  });
}

PairEvaluator::PairEvaluator(int m, int n) : m_(m), n_(n) {
  require_mode(m);
  require_mode(n);
  const int top = std::max(m, n);
  cx_.resize(top);
  cp_.resize(top);
  for (int j = 1; j < top; ++j) {
    cx_[j] = std::sqrt(2.0 / j);
    cp_[j] = std::sqrt((j - 1.0) / j);
  }
}

void PairEvaluator::eval(double x, double& hm, double& hn) const {
  const double eref = -x * x / 2 * static_cast<double>(kLog2E);
  const double efloor = std::floor(eref);
  std::int64_t e2 = static_cast<std::int64_t>(efloor);
  double v = static_cast<double>(kQuarterRootPiInv) * std::exp2(eref - efloor);
  double vprev = 0.0;
  double vm = 0.0, vn = 0.0;
  std::int64_t em = 0, en = 0;
  if (m_ == 1) { vm = v; em = e2; }
  if (n_ == 1) { vn = v; en = e2; }
  const int top = std::max(m_, n_);
  for (int j = 1; j < top; ++j) {
    const double vnext = x * cx_[j] * v - cp_[j] * vprev;
    vprev = v;
    v = vnext;
    if (j + 1 == m_) { vm = v; em = e2; }
    if (j + 1 == n_) { vn = v; en = e2; }
    if ((j & 31) == 0) {
      int ex = 0;
      (void)std::frexp(std::max(std::abs(v), std::abs(vprev)), &ex);
      if (ex > 200 || ex < -200) {
        const double scale = std::exp2(static_cast<double>(-ex));
        v *= scale;
        vprev *= scale;
        e2 += ex;
      }
    }
  }
  hm = assemble(vm, em);
  hn = assemble(vn, en);
}

// ---------------------------------------------------------------------------
// Action integrals
// ---------------------------------------------------------------------------

double zeta(int m, double x) {
  const OscillatorMode md = mode(m);
  require_finite(x);
  if (x < 0.0) throw ValidationError("zeta: x must be >= 0");
  const double X = md.turning_point;
  if (x > X * (1.0 + 1e-12))
    throw ValidationError("zeta: x beyond the turning point; use zeta_evanescent");
  const double u = std::min(x / X, 1.0);
  const double phi = std::acos(u);
  return -(md.lambda / 2.0) * action_kernel<true>(phi);
}

double zeta_evanescent(int m, double x) {
  const OscillatorMode md = mode(m);
  require_finite(x);
  const double X = md.turning_point;
  if (x < X * (1.0 - 1e-12))
    throw ValidationError("zeta_evanescent: x below the turning point; use zeta");
  const double psi = std::acosh(std::max(x / X, 1.0));
  return (md.lambda / 2.0) * action_kernel<false>(psi);
}

double zeta_deriv(int m, double x) {
  const OscillatorMode md = mode(m);
  require_finite(x);
  return std::sqrt(std::abs(md.lambda - x * x));
}

// ---------------------------------------------------------------------------
// Turning-point approximant
// ---------------------------------------------------------------------------

namespace {

std::complex<double> langer_value(const OscillatorMode& md, double x, double& zeta_signed) {
  const double X = md.turning_point;
  if (x < 0.0) throw ValidationError("langer_psi1: x must be >= 0");
  const double exclusion = std::pow(X, -1.0 / 3.0) / 8.0;
  if (std::abs(x - X) < exclusion)
    throw TurningPointProximity(
        "langer_psi1: |x - X_m| < X_m^{-1/3}/8 (m=" + std::to_string(md.m) +
        "); approximant unreliable, use hermite_eval");
  if (x < X) {
    const double s = -zeta(md.m, x);
    zeta_signed = -s;
    const double amp = std::pow(md.lambda - x * x, -0.25);
    const std::complex<double> phase(0.866025403784438646763723170753, 0.5);  // e^{i pi/6}
    return std::sqrt(s) * amp * phase * bessel::hankel1_plus_third(s);
  }
  const double s = zeta_evanescent(md.m, x);
  zeta_signed = s;
  const double amp = std::pow(x * x - md.lambda, -0.25);
  return {std::sqrt(s) / static_cast<double>(kPiL) * amp * bessel::k_plus_third(s), 0.0};
}

}  // namespace

std::complex<double> langer_psi1(int m, double x) {
  const OscillatorMode md = mode(m);
  require_finite(x);
  double zs = 0.0;
  return langer_value(md, x, zs);
}

LangerApproximant langer(int m, double x) {
  const OscillatorMode md = mode(m);
  require_finite(x);
  LangerApproximant out;
  out.mode = md;
  out.value = langer_value(md, x, out.zeta);
  return out;
}

}  // namespace oscham::hermite
