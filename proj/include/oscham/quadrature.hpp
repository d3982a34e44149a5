// quadrature.hpp — Gauss–Kronrod 15(7) panel rule and a globally adaptive
// driver with certified per-panel error estimates.
//
// The panel rule follows the classical QUADPACK construction: the Kronrod
// value is the result, |K15 − G7| feeds a sharpened error estimate through
// the resasc nonlinearity, and adaptivity is a priority queue on panel error.
// The value type is templated (double or std::complex<double>).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "oscham/errors.hpp"

namespace oscham::quadrature {

// Kronrod abscissae on [0,1] side of [-1,1] (even indices: Gauss points).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

namespace detail {
// Scalar companion type of the accumulator: double stays double,
// std::complex<R> maps to R (so weight products stay well-typed for
// long double accumulators).
template <class T>
struct ScalarOf {
  using type = T;
};
template <class R>
struct ScalarOf<std::complex<R>> {
  using type = R;
};
}  // namespace detail

template <class T>
struct PanelEstimate {
  T value{};          // 15-point Kronrod value
  double error = 0.0;  // sharpened |true - value| estimate
  double resabs = 0.0;  // integral of |f|
};

// One Gauss–Kronrod 15(7) application to f over [a, b].
template <class T, class F>
PanelEstimate<T> gk15(F&& f, double a, double b) {
  using S = typename detail::ScalarOf<T>::type;
  const double center = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  const T fc = f(center);
  T resg = static_cast<S>(kWg[3]) * fc;
  T resk = static_cast<S>(kWgk[7]) * fc;
  double resabs = static_cast<double>(std::abs(resk));
  T fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = hlgth * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const T fsum = fv1[j] + fv2[j];
    if (j % 2 == 1) resg += static_cast<S>(kWg[j / 2]) * fsum;
    resk += static_cast<S>(kWgk[j]) * fsum;
    resabs +=
        kWgk[j] * static_cast<double>(std::abs(fv1[j]) + std::abs(fv2[j]));
  }
  const T reskh = resk * static_cast<S>(0.5);
  double resasc = kWgk[7] * static_cast<double>(std::abs(fc - reskh));
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * static_cast<double>(std::abs(fv1[j] - reskh) +
                                            std::abs(fv2[j] - reskh));

  PanelEstimate<T> out;
  out.value = resk * static_cast<S>(hlgth);
  out.resabs = resabs * dhlgth;
  resasc *= dhlgth;
  double err = static_cast<double>(std::abs((resk - resg) * static_cast<S>(hlgth)));
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double epmach = 2.220446049250313e-16;
  const double uflow = 2.2250738585072014e-308;
  if (out.resabs > uflow / (50.0 * epmach))
    err = std::max(epmach * 50.0 * out.resabs, err);
  out.error = err;
  return out;
}

template <class T>
struct AdaptiveResult {
  T value{};
  double error = 0.0;
  std::size_t panels = 0;
};

/// One interval of the final partition produced by `adaptive`, with its
/// contribution to the total error estimate.
struct TracedPanel {
  double a = 0.0, b = 0.0;
  double error = 0.0;
};

namespace detail {
template <class T>
struct Piece {
  double a, b;
  T value;
  double error;
};
template <class T>
struct ByError {
  bool operator()(const Piece<T>& p, const Piece<T>& q) const {
    return p.error < q.error;
  }
};
}  // namespace detail

// Globally adaptive integration of f over the union of the seed intervals.
// Bisects the worst panel until the summed error estimate <= abs_tol or the
// panel budget is exhausted (then throws ToleranceNotMet carrying the best
// achieved value/error; complex values are reported as-is, real values with
// zero imaginary part).
template <class T, class F>
AdaptiveResult<T> adaptive(F&& f, const std::vector<std::pair<double, double>>& seeds,
                           double abs_tol, std::size_t max_panels = 20000,
                           std::vector<TracedPanel>* trace = nullptr) {
  if (abs_tol <= 0.0) throw ValidationError("adaptive quadrature: abs_tol must be > 0");
  std::priority_queue<detail::Piece<T>, std::vector<detail::Piece<T>>,
                      detail::ByError<T>>
      queue;
  std::vector<detail::Piece<T>> frozen;  // unsplittable pieces, kept for the trace
  T total{};
  double total_err = 0.0;
  std::size_t count = 0;
  for (const auto& [a, b] : seeds) {
    if (!(b > a)) continue;
    const auto est = gk15<T>(f, a, b);
    queue.push({a, b, est.value, est.error});
    total += est.value;
    total_err += est.error;
    ++count;
  }
  while (total_err > abs_tol && !queue.empty()) {
    if (count >= max_panels) {
      throw ToleranceNotMet(
          "adaptive quadrature: panel budget exhausted before reaching tolerance",
          std::complex<double>(total), total_err);
    }
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval not splittable at double precision; error stays counted
      frozen.push_back(worst);
      continue;
    }
    const auto left = gk15<T>(f, worst.a, mid);
    const auto right = gk15<T>(f, mid, worst.b);
    total += (left.value + right.value) - worst.value;
    total_err += (left.error + right.error) - worst.error;
    queue.push({worst.a, mid, left.value, left.error});
    queue.push({mid, worst.b, right.value, right.error});
    ++count;
  }
  AdaptiveResult<T> out;
  out.value = total;
  out.error = total_err;
  out.panels = count;
  if (trace != nullptr) {
    trace->clear();
    trace->reserve(frozen.size() + queue.size());
    for (const auto& p : frozen) trace->push_back({p.a, p.b, p.error});
    while (!queue.empty()) {
      const auto& p = queue.top();
      trace->push_back({p.a, p.b, p.error});
      queue.pop();
    }
    std::sort(trace->begin(), trace->end(),
              [](const TracedPanel& u, const TracedPanel& v) { return u.a < v.a; });
  }
  return out;
}

template <class T, class F>
AdaptiveResult<T> adaptive(F&& f, double a, double b, double abs_tol,
                           std::size_t max_panels = 20000,
                           std::vector<TracedPanel>* trace = nullptr) {
  return adaptive<T>(std::forward<F>(f), std::vector<std::pair<double, double>>{{a, b}},
                     abs_tol, max_panels, trace);
}

}  // namespace oscham::quadrature
