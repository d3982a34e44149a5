// decay.cpp — decay-law constants and the grid scan driver.

#include "oscham/decay.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "oscham/parallel.hpp"

namespace oscham::decay {

// ---------------------------------------------------------------- the law

double mu_window(double beta) {
  if (!std::isfinite(beta) || !(beta > 1.0))
    throw ValidationError("decay law: beta must be finite and > 1");
  if (beta < 2.0) return beta / 6.0;
  if (beta == 2.0) return 2.0 / 9.0;
  return (beta - 2.0) / (4.0 * beta - 2.0);
}

bool mu_admissible(double beta, double mu) {
  return std::isfinite(mu) && mu >= 0.0 && mu < mu_window(beta);
}

double l_exponent(double beta, double mu) {
  if (!mu_admissible(beta, mu))
    throw ValidationError(
        "decay law: mu outside the admissible window [0, w(beta))");
  return 0.25 * (mu_window(beta) - mu);
}

double c_k_beta(double k, double beta) {
  if (!std::isfinite(k) || k == 0.0)
    throw ValidationError("decay law: k must be finite and nonzero");
  if (!std::isfinite(beta) || !(beta > 1.0))
    throw ValidationError("decay law: beta must be finite and > 1");
  const double ak = std::abs(k);
  if (beta < 2.0) {
    const double cubic =
        std::pow(std::abs(beta * (beta - 1.0) * (beta - 2.0) * k), -1.0 / 3.0);
    return std::max({cubic, 1.0 / ak, std::pow(ak, 1.0 / (4.0 - 2.0 * beta))});
  }
  if (beta == 2.0) return std::max(1.0 / ak, 1.0);
  return std::max(1.0 / (beta * ak), 1.0);
}

DecayLaw decay_law(double k, double beta, double mu) {
  DecayLaw law;
  law.beta = beta;
  law.mu = mu;
  law.k = k;
  law.l_star = l_exponent(beta, mu);
  law.c = c_k_beta(k, beta);
  return law;
}

// ---------------------------------------------------------------- scans

namespace {

// Least-squares slope of y against x; returns 0 for fewer than two points.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

DecayScanReport decay_scan(double k, double beta, double mu,
                           const std::vector<int>& modes, bool diag_only,
                           const std::vector<int>& band_offsets,
                           double abs_tol, unsigned threads) {
  DecayScanReport report;
  report.law = decay_law(k, beta, mu);
  if (modes.empty())
    throw ValidationError("decay scan: the mode list must not be empty");
  for (int m : modes)
    if (m < 1) throw ValidationError("decay scan: mode indices must be >= 1");

  // Build the (m, n) pair list: diagonal anchors first, then bands.
  std::vector<std::pair<int, int>> pairs;
  std::set<std::pair<int, int>> seen;
  auto add_pair = [&](int m, int n) {
    if (m > n) std::swap(m, n);
    if (seen.insert({m, n}).second) pairs.push_back({m, n});
  };
  for (int m : modes) add_pair(m, m);
  if (!diag_only) {
    for (int off : band_offsets) {
      if (off < 0)
        throw ValidationError("decay scan: band offsets must be >= 0");
      for (int m : modes) add_pair(m, m + off);
    }
  }

  report.grid.resize(pairs.size());
  parallel_for(
      pairs.size(),
      [&](std::size_t i) {
        const auto [m, n] = pairs[i];
        DecayScanRow row;
        row.m = m;
        row.n = n;
        if (((m + n) & 1) != 0) {
          // exact parity zero; keep the row, excluded from fits and sups
          report.grid[i] = row;
          return;
        }
        oscint::OscIntegralQuery q;
        q.m = m;
        q.n = n;
        q.k = k;
        q.beta = beta;
        q.mu = mu;
        oscint::MatrixElementOptions opt;
        opt.abs_tol = abs_tol;
        opt.record_panels = false;
        const auto r = oscint::matrix_element(q, opt);
        row.value = r.value;
        row.abs_value = std::abs(r.value);
        row.abs_error = r.abs_error_estimate;
        const double mn = static_cast<double>(m) * static_cast<double>(n);
        row.compensated = row.abs_value * std::pow(mn, report.law.l_star) /
                          report.law.c;
        report.grid[i] = row;
      },
      threads);

  std::vector<double> lx, ly, lyc;
  for (const auto& row : report.grid) {
    if (row.abs_value <= 0.0) continue;
    const double mn =
        static_cast<double>(row.m) * static_cast<double>(row.n);
    report.envelope_sup = std::max(
        report.envelope_sup, row.abs_value * std::pow(mn, report.law.l_star));
    if (row.m == row.n && mn >= 1e3) {
      lx.push_back(std::log(mn));
      ly.push_back(std::log(row.abs_value));
      lyc.push_back(std::log(row.compensated));
    }
  }
  report.fit_slope = fit_slope(lx, ly);
  report.compensated_slope = fit_slope(lx, lyc);
  report.pass = report.compensated_slope <= 0.02;
  return report;
}

}  // namespace oscham::decay
