// oscint.cpp — oscillatory matrix elements: panel planning, adaptive
// quadrature over both precisions, phase profiles, van der Corput audits.

#include "oscham/oscint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "oscham/hermite.hpp"
#include "oscham/quadrature.hpp"

namespace oscham::oscint {

namespace hmt = oscham::hermite;
namespace qd = oscham::quadrature;

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;
// seed panels carry at most this many waves; adaptivity does the rest
constexpr double kMaxWavesPerSeed = 8.0;

// ---------------------------------------------------------------- tail

// Envelope bound on the doubled discarded tail
//   2 |∫_{x0}^∞ <x>^mu e^{i k x^beta} h_m h_n dx|
// for x0 >= 2 X_n.  Beyond both turning points |h_j| <=
// 0.5 (x^2 - lambda_j)^{-1/4} e^{-zeta_ev_j(x)}; the amplitude factor is
// monotone decreasing, the weight grows slower than e^{mu (x - x0)/x0}, and
// zeta_ev_m + zeta_ev_n grows at least linearly with slope
// R = sqrt(x0^2 - lambda_m) + sqrt(x0^2 - lambda_n).  A further factor 2 of
// slack is kept on top of the envelope constants.
double tail_bound_at(int m, int n, double mu, double x0) {
  const double lm = hmt::eigenvalue(m), ln = hmt::eigenvalue(n);
  const double d0 = hmt::zeta_evanescent(m, x0) + hmt::zeta_evanescent(n, x0);
  const double slope = std::sqrt(x0 * x0 - lm) + std::sqrt(x0 * x0 - ln);
  const double denom = slope - mu / x0;
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  const double amp =
      std::pow(x0 * x0 - lm, -0.25) * std::pow(x0 * x0 - ln, -0.25);
  const double lead =
      2.0 * 2.0 * 0.25 * amp * std::pow(1.0 + x0 * x0, 0.5 * mu) / denom;
  const double log_tail = std::log(lead) - d0;
  return log_tail < -700.0 ? 0.0 : std::exp(log_tail);
}

// Smallest cutoff >= max(2 X_n, hint) whose tail bound clears tail_tol.
double choose_x_end(int m, int n, double mu, double tail_tol, double hint) {
  const double xn = hmt::mode(std::max(m, n)).turning_point;
  double x0 = std::max(2.0 * xn, hint);
  for (int iter = 0; iter < 200; ++iter) {
    const double bound = tail_bound_at(m, n, mu, x0);
    if (bound <= tail_tol) return x0;
    if (!std::isfinite(bound)) {
      x0 += std::max(1.0, 0.5 * xn);
      continue;
    }
    const double lm = hmt::eigenvalue(m), ln = hmt::eigenvalue(n);
    const double slope = std::sqrt(x0 * x0 - lm) + std::sqrt(x0 * x0 - ln);
    x0 += std::min(std::log(std::max(bound / tail_tol, 2.0)) / slope + 0.25,
                   std::max(1.0, xn));
  }
  throw NumericalError("matrix element: tail cutoff search did not converge");
}

// ---------------------------------------------------------------- planning

struct Plan {
  std::vector<std::pair<double, double>> seeds;
  double core_end = 0.0;    // panels ending here or left of it are "gk-core"
  double x_end = 0.0;       // quadrature cutoff
  double tail_bound = 0.0;  // certified bound beyond x_end (already doubled)
};

// Splits [a, b] until each piece holds at most kMaxWavesPerSeed waves of the
// combined local frequency |k| beta x^{beta-1} + sqrt(lambda_m - x^2)_+
// + sqrt(lambda_n - x^2)_+ (power part bounded at the right end, WKB parts at
// the left end).  Emits left to right.
void presplit(double lm, double ln, double kb, double beta, double a, double b,
              std::vector<std::pair<double, double>>& out) {
  if (!(b > a)) return;
  std::vector<std::pair<double, double>> stack{{a, b}};
  while (!stack.empty()) {
    const auto [u, v] = stack.back();
    stack.pop_back();
    const double fmax = kb * std::pow(v, beta - 1.0) +
                        std::sqrt(std::max(lm - u * u, 0.0)) +
                        std::sqrt(std::max(ln - u * u, 0.0));
    if ((v - u) * fmax <= kMaxWavesPerSeed * kTwoPi ||
        (v - u) < 1e-12 * (1.0 + v)) {
      out.push_back({u, v});
    } else {
      const double mid = 0.5 * (u + v);
      stack.push_back({mid, v});
      stack.push_back({u, mid});
    }
  }
}

// Landmarks separating the smooth core, the WKB bulk, the turning-point
// layers of both modes, and the evanescent run-out.  Heuristic seeds only;
// the adaptive pass is responsible for accuracy.
std::vector<double> landmarks(const OscIntegralQuery& q, double x_end) {
  const auto mm = hmt::mode(q.m);
  const auto mn = hmt::mode(q.n);
  const double xm = mm.turning_point, xn = mn.turning_point;
  std::vector<double> pts;
  auto add = [&](double v) {
    if (v > 0.0 && v < x_end) pts.push_back(v);
  };
  add(std::min(1.0, std::pow(xm, 2.0 / 3.0)));
  add(std::pow(xm, 2.0 / 3.0));
  if (q.beta < 2.0) {
    add(xm - std::pow(xm, 1.0 - q.beta / 3.0));
  } else if (q.beta == 2.0) {
    add(xm - std::pow(xm, 5.0 / 9.0));
  } else {
    add(std::pow(xn, (5.0 * q.beta - 4.0) /
                         (2.0 * (q.beta - 1.0) * (2.0 * q.beta - 1.0))));
  }
  const double wm = std::pow(xm, -1.0 / 3.0);
  const double wn = std::pow(xn, -1.0 / 3.0);
  add(xm - wm);
  add(xm);
  add(xm + wm);
  add(xn - wn);
  add(xn);
  add(xn + wn);
  add(2.0 * xm);
  add(2.0 * xn);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double u, double v) {
                          return std::abs(v - u) < 1e-10 * (1.0 + std::abs(u));
                        }),
            pts.end());
  return pts;
}

// q must be canonical (m <= n).
Plan build_plan(const OscIntegralQuery& q, double abs_tol, double x_end_hint) {
  Plan plan;
  const double tail_tol = 0.2 * abs_tol;
  plan.x_end = choose_x_end(q.m, q.n, q.mu, tail_tol, x_end_hint);
  plan.tail_bound = tail_bound_at(q.m, q.n, q.mu, plan.x_end);
  const double xm = hmt::mode(q.m).turning_point;
  plan.core_end = std::min({1.0, std::pow(xm, 2.0 / 3.0), plan.x_end});
  const double lm = hmt::eigenvalue(q.m), ln = hmt::eigenvalue(q.n);
  const double kb = std::abs(q.k) * q.beta;
  double prev = 0.0;
  for (double p : landmarks(q, plan.x_end)) {
    presplit(lm, ln, kb, q.beta, prev, p, plan.seeds);
    prev = p;
  }
  presplit(lm, ln, kb, q.beta, prev, plan.x_end, plan.seeds);
  return plan;
}

}  // namespace

// ---------------------------------------------------------------- queries

void validate(const OscIntegralQuery& q) {
  if (q.m < 1 || q.n < 1)
    throw ValidationError("matrix element query: mode indices must be >= 1");
  if (!std::isfinite(q.k) || q.k == 0.0)
    throw ValidationError("matrix element query: k must be finite and nonzero");
  if (!std::isfinite(q.beta) || !(q.beta > 1.0))
    throw ValidationError("matrix element query: beta must be finite and > 1");
  if (!std::isfinite(q.mu) || q.mu < 0.0)
    throw ValidationError("matrix element query: mu must be finite and >= 0");
}

// ---------------------------------------------------------------- main op

MatrixElementResult matrix_element(const OscIntegralQuery& q,
                                   double abs_tol) {
  MatrixElementOptions opt;
  opt.abs_tol = abs_tol;
  return matrix_element(q, opt);
}

MatrixElementResult matrix_element(const OscIntegralQuery& q_in,
                                   const MatrixElementOptions& opt) {
  validate(q_in);
  if (!(opt.abs_tol > 0.0) || !std::isfinite(opt.abs_tol))
    throw ValidationError("matrix element: abs_tol must be positive");
  MatrixElementResult res;
  if (((q_in.m + q_in.n) & 1) != 0) return res;  // exact parity zero

  OscIntegralQuery q = q_in;
  if (q.m > q.n) std::swap(q.m, q.n);  // the integrand is (m, n)-symmetric
  const Plan plan = build_plan(q, opt.abs_tol, opt.x_end_hint);

  const hmt::PairEvaluator pair(q.m, q.n);
  const double k = q.k, beta = q.beta, mu = q.mu;
  auto f = [&](double x) -> std::complex<double> {
    double hmv = 0.0, hnv = 0.0;
    pair.eval(x, hmv, hnv);
    const double w = (mu == 0.0) ? 1.0 : std::pow(1.0 + x * x, 0.5 * mu);
    const double phase = k * std::pow(x, beta);
    return std::complex<double>(std::cos(phase), std::sin(phase)) *
           (w * hmv * hnv);
  };

  // value = 2 * (half-line quadrature) + tail; the quadrature half of the
  // budget is therefore 0.5 * 0.8 * abs_tol on the half-line estimate.
  const double quad_tol = 0.4 * opt.abs_tol;
  std::vector<qd::TracedPanel> trace;
  std::complex<double> half{};
  double half_err = 0.0;
  bool budget_hit = false;
  try {
    const auto r = qd::adaptive<std::complex<double>>(
        f, plan.seeds, quad_tol, opt.max_panels,
        opt.record_panels ? &trace : nullptr);
    half = r.value;
    half_err = r.error;
  } catch (const ToleranceNotMet& e) {
    budget_hit = true;
    half = e.value;
    half_err = e.abs_error;
  }
  res.value = 2.0 * half;
  res.abs_error_estimate = 2.0 * half_err + plan.tail_bound;
  if (opt.record_panels) {
    res.panels.reserve(trace.size() + 1);
    for (const auto& p : trace) {
      res.panels.push_back(
          {p.a, p.b,
           p.b <= plan.core_end + 1e-15 ? "gk-core" : "gk-osc",
           2.0 * p.error});
    }
    res.panels.push_back({plan.x_end,
                          std::numeric_limits<double>::infinity(),
                          "tail-bound", plan.tail_bound});
  }
  const double target = std::max(opt.abs_tol, 1e-8 * std::abs(res.value));
  if (budget_hit && res.abs_error_estimate > target) {
    throw ToleranceNotMet("matrix element: tolerance not met within the panel budget",
                          res.value, res.abs_error_estimate);
  }
  return res;
}

MatrixElementResultLd matrix_element_ld(const OscIntegralQuery& q_in,
                                        double abs_tol) {
  validate(q_in);
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
    throw ValidationError("matrix element: abs_tol must be positive");
  MatrixElementResultLd res;
  if (((q_in.m + q_in.n) & 1) != 0) return res;

  OscIntegralQuery q = q_in;
  if (q.m > q.n) std::swap(q.m, q.n);
  const Plan plan = build_plan(q, abs_tol, 0.0);

  const long double kl = q.k, betal = q.beta, mul = q.mu;
  const int m = q.m, n = q.n;
  auto f = [&](double x) -> std::complex<long double> {
    const long double xl = x;
    const long double hmv = hmt::hermite_eval_ld(m, xl);
    const long double hnv = hmt::hermite_eval_ld(n, xl);
    const long double w =
        (mul == 0.0L) ? 1.0L : std::pow(1.0L + xl * xl, 0.5L * mul);
    const long double phase = kl * std::pow(xl, betal);
    return std::complex<long double>(std::cos(phase), std::sin(phase)) *
           (w * hmv * hnv);
  };

  std::complex<long double> half{};
  double half_err = 0.0;
  bool budget_hit = false;
  try {
    const auto r = qd::adaptive<std::complex<long double>>(
        f, plan.seeds, 0.4 * abs_tol, 60000);
    half = r.value;
    half_err = r.error;
  } catch (const ToleranceNotMet& e) {
    budget_hit = true;
    half = std::complex<long double>(e.value);
    half_err = e.abs_error;
  }
  res.value = 2.0L * half;
  res.abs_error_estimate = 2.0 * half_err + plan.tail_bound;
  const double target =
      std::max(abs_tol, 1e-8 * static_cast<double>(std::abs(res.value)));
  if (budget_hit && res.abs_error_estimate > target) {
    throw ToleranceNotMet("matrix element: tolerance not met within the panel budget",
                          std::complex<double>(res.value),
                          res.abs_error_estimate);
  }
  return res;
}

// ---------------------------------------------------------------- phase

double PhaseProfile::g(double x) const {
  const double sm = std::sqrt(std::max(lambda_m - x * x, 0.0));
  const double sn = std::sqrt(std::max(lambda_n - x * x, 0.0));
  return k * beta * std::pow(x, beta - 1.0) + sm - sn;
}

double PhaseProfile::dg(double x) const {
  const double sm = std::sqrt(std::max(lambda_m - x * x, 0.0));
  const double sn = std::sqrt(std::max(lambda_n - x * x, 0.0));
  return k * beta * (beta - 1.0) * std::pow(x, beta - 2.0) - x / sm + x / sn;
}

double PhaseProfile::d2g(double x) const {
  const double sm = std::sqrt(std::max(lambda_m - x * x, 0.0));
  const double sn = std::sqrt(std::max(lambda_n - x * x, 0.0));
  return k * beta * (beta - 1.0) * (beta - 2.0) * std::pow(x, beta - 3.0) -
         lambda_m / (sm * sm * sm) + lambda_n / (sn * sn * sn);
}

PhaseProfile phase_profile(int m, int n, double k, double beta) {
  OscIntegralQuery q;
  q.m = m;
  q.n = n;
  q.k = k;
  q.beta = beta;
  validate(q);
  if (m > n)
    throw ValidationError("phase profile: requires m <= n (swap the indices)");
  PhaseProfile prof;
  prof.m = m;
  prof.n = n;
  prof.k = k;
  prof.beta = beta;
  prof.lambda_m = hmt::eigenvalue(m);
  prof.lambda_n = hmt::eigenvalue(n);
  prof.turning_point_m = hmt::mode(m).turning_point;

  const double xm = prof.turning_point_m;
  const double tol = 1e-12 * std::max(1.0, xm);
  const double gscale =
      std::abs(k) * beta * std::pow(xm, beta - 1.0) + std::sqrt(prof.lambda_n);
  constexpr int kGrid = 2048;
  double xprev = 0.0;
  double gprev = prof.g(0.0);
  auto push_root = [&](double r) {
    if (prof.stationary_points.empty() ||
        std::abs(r - prof.stationary_points.back()) > 2.0 * tol)
      prof.stationary_points.push_back(r);
  };
  if (std::abs(gprev) <= 1e-14 * gscale) push_root(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = xm * static_cast<double>(i) / kGrid;
    const double gx = prof.g(x);
    if (std::abs(gx) <= 1e-14 * gscale) {
      push_root(x);
    } else if (gprev * gx < 0.0) {
      double lo = xprev, hi = x, glo = gprev;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double gm = prof.g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (glo * gm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          glo = gm;
        }
      }
      push_root(0.5 * (lo + hi));
    }
    xprev = x;
    gprev = gx;
  }
  return prof;
}

// ---------------------------------------------------------------- vdC bound

double vdc_constant(int order) {
  switch (order) {
    case 1:
      return 3.0;
    case 2:
      return 10.0;
    case 3:
      return 30.0;
    default:
      throw ValidationError("van der Corput: order must be 1, 2 or 3");
  }
}

VdcReport vdc_bound_check(const std::function<double(double)>& phi,
                          const std::function<double(double)>& dkphi,
                          const std::function<std::complex<double>(double)>& psi,
                          const std::function<std::complex<double>(double)>& dpsi,
                          double a, double b, int order) {
  const double c_k = vdc_constant(order);
  if (!std::isfinite(a) || !std::isfinite(b) || !(b >= a))
    throw ValidationError("van der Corput: invalid panel");

  VdcReport rep;
  // Extract the oscillation scale from the order-th derivative on a dense
  // sample; the normalized phase then has |phi^{(order)}| >= 1 there.
  constexpr int kSamples = 401;
  double lam = std::numeric_limits<double>::infinity();
  double sign_ref = 0.0;
  std::vector<double> first_deriv;
  if (order == 1) first_deriv.reserve(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double x =
        a + (b - a) * static_cast<double>(i) / (kSamples - 1);
    const double v = dkphi(x);
    if (!std::isfinite(v))
      throw AssumptionViolated("van der Corput: phase derivative not finite");
    if (v != 0.0) {
      if (sign_ref == 0.0) {
        sign_ref = v > 0.0 ? 1.0 : -1.0;
      } else if (v * sign_ref < 0.0) {
        throw AssumptionViolated(
            "van der Corput: phase derivative changes sign on the panel");
      }
    }
    lam = std::min(lam, std::abs(v));
    if (order == 1) first_deriv.push_back(v);
  }
  if (!(lam > 0.0))
    throw AssumptionViolated(
        "van der Corput: |Phi^{(order)}| vanishes on the panel");
  if (order == 1) {
    bool nondec = true, noninc = true;
    for (std::size_t i = 1; i < first_deriv.size(); ++i) {
      if (first_deriv[i] < first_deriv[i - 1]) nondec = false;
      if (first_deriv[i] > first_deriv[i - 1]) noninc = false;
    }
    if (!nondec && !noninc)
      throw AssumptionViolated(
          "van der Corput: order 1 requires a monotone phase derivative");
  }
  rep.lambda_scale = lam;

  if (a == b) {
    rep.lhs = 0.0;
    rep.rhs = c_k * std::pow(lam, -1.0 / order) * std::abs(psi(b));
    rep.pass = true;
    return rep;
  }

  // Left side: |∫ psi e^{i Phi}|, pre-split by the sampled phase variation.
  double variation = 0.0;
  double phi_prev = phi(a);
  for (int i = 1; i < kSamples; ++i) {
    const double x =
        a + (b - a) * static_cast<double>(i) / (kSamples - 1);
    const double p = phi(x);
    variation += std::abs(p - phi_prev);
    phi_prev = p;
  }
  const int pieces =
      std::max(1, static_cast<int>(std::ceil(variation / (4.0 * kPi))));
  std::vector<std::pair<double, double>> seeds;
  seeds.reserve(pieces);
  for (int i = 0; i < pieces; ++i) {
    seeds.push_back({a + (b - a) * static_cast<double>(i) / pieces,
                     a + (b - a) * static_cast<double>(i + 1) / pieces});
  }
  auto osc = [&](double x) -> std::complex<double> {
    return psi(x) * std::polar(1.0, phi(x));
  };
  const auto lhs_int =
      qd::adaptive<std::complex<double>>(osc, seeds, 1e-12, 20000);
  rep.lhs = std::abs(lhs_int.value);

  // Right side: c_k lambda^{-1/k} (|psi(b)| + ∫ |psi'|).
  auto abs_dpsi = [&](double x) -> double { return std::abs(dpsi(x)); };
  const auto var_int = qd::adaptive<double>(abs_dpsi, a, b, 1e-10, 20000);
  rep.rhs = c_k * std::pow(lam, -1.0 / order) *
            (std::abs(psi(b)) + var_int.value);
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

VdcReport vdc_bound_check(const OscIntegralQuery& q_in, double a, double b,
                          int order, PhaseChannel channel) {
  validate(q_in);
  vdc_constant(order);
  int m = q_in.m, n = q_in.n;
  if (m > n) std::swap(m, n);
  const auto mm = hmt::mode(m);
  const auto mn = hmt::mode(n);
  const double xm = mm.turning_point;
  const double margin = std::pow(xm, -1.0 / 3.0);
  if (!(a > 0.0 && b > a && b <= xm - margin + 1e-12))
    throw ValidationError(
        "van der Corput: panel must satisfy 0 < a < b <= X_m - X_m^{-1/3}");

  const double lm = mm.lambda, ln = mn.lambda;
  const double k = q_in.k, beta = q_in.beta, mu = q_in.mu;
  const bool diff = channel == PhaseChannel::difference;

  auto phi = [=](double x) -> double {
    const double zm = hmt::zeta(m, x);
    const double zn = hmt::zeta(n, x);
    const double base = k * std::pow(x, beta);
    return diff ? base + zm - zn : base - zm - zn;
  };
  auto dkphi = [=](double x) -> double {
    const double sm = std::sqrt(std::max(lm - x * x, 0.0));
    const double sn = std::sqrt(std::max(ln - x * x, 0.0));
    switch (order) {
      case 1: {
        const double d = k * beta * std::pow(x, beta - 1.0);
        return diff ? d + sm - sn : d - sm - sn;
      }
      case 2: {
        const double d = k * beta * (beta - 1.0) * std::pow(x, beta - 2.0);
        return diff ? d - x / sm + x / sn : d + x / sm + x / sn;
      }
      default: {
        const double d =
            k * beta * (beta - 1.0) * (beta - 2.0) * std::pow(x, beta - 3.0);
        const double tm = lm / (sm * sm * sm), tn = ln / (sn * sn * sn);
        return diff ? d - tm + tn : d + tm + tn;
      }
    }
  };
  auto psi = [=](double x) -> std::complex<double> {
    const double am = lm - x * x, an = ln - x * x;
    return std::pow(1.0 + x * x, 0.5 * mu) * std::pow(am, -0.25) *
           std::pow(an, -0.25) / (2.0 * kPi);
  };
  auto dpsi = [=](double x) -> std::complex<double> {
    const double am = lm - x * x, an = ln - x * x;
    const std::complex<double> w = psi(x);
    return w * (mu * x / (1.0 + x * x) + 0.5 * x / am + 0.5 * x / an);
  };
  return vdc_bound_check(phi, dkphi, psi, dpsi, a, b, order);
}

}  // namespace oscham::oscint
