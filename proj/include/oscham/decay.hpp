// decay.hpp — the (mn)^{-l} decay law: exponents, envelope constants, and
// the scan driver that verifies the law across mode grids.

#pragma once

#include <complex>
#include <vector>

#include "oscham/oscint.hpp"

namespace oscham::decay {

// ---------------------------------------------------------------- the law

/// Width of the admissible weight window: mu must satisfy 0 <= mu < w(beta),
///   w = beta/6                  (1 < beta < 2)
///       2/9                     (beta = 2)
///       (beta - 2)/(4 beta - 2) (beta > 2).
/// ValidationError for beta <= 1.
double mu_window(double beta);

/// Strict window test 0 <= mu < w(beta).
bool mu_admissible(double beta, double mu);

/// Decay exponent l(beta, mu) = (w(beta) - mu)/4 for admissible mu
/// (ValidationError otherwise).
double l_exponent(double beta, double mu);

/// Frequency constant of the envelope bound |I| <= C_{k,beta} (mn)^{-l}:
///   1 < beta < 2 : max(|beta (beta-1) (beta-2) k|^{-1/3}, |k|^{-1}, |k|^{1/(4-2 beta)})
///   beta = 2     : max(|k|^{-1}, 1)
///   beta > 2     : max(|beta k|^{-1}, 1).
double c_k_beta(double k, double beta);

struct DecayLaw {
  double beta = 2.0;
  double mu = 0.0;
  double k = 1.0;
  double l_star = 0.0;  ///< l(beta, mu)
  double c = 1.0;       ///< C_{k,beta}
};

/// Bundles the exponent and constant; validates k and the mu window.
DecayLaw decay_law(double k, double beta, double mu);

// ---------------------------------------------------------------- scans

struct DecayScanRow {
  int m = 1, n = 1;
  std::complex<double> value{0.0, 0.0};
  double abs_value = 0.0;
  double compensated = 0.0;  ///< |I| (mn)^{l*} / C_{k,beta}
  double abs_error = 0.0;    ///< certified quadrature estimate
};

struct DecayScanReport {
  DecayLaw law;
  std::vector<DecayScanRow> grid;
  double envelope_sup = 0.0;      ///< sup |I| (mn)^{l*} over nonzero entries
  double fit_slope = 0.0;         ///< log|I| vs log(mn), diagonal, mn >= 1e3
  double compensated_slope = 0.0; ///< same fit on the compensated values
  bool pass = false;              ///< compensated_slope <= +0.02
};

/// Scans the diagonal pairs (m, m) for each anchor in `modes` and, unless
/// diag_only, the bands (m, m + off) for each offset in `band_offsets`.
/// Odd-parity pairs are recorded as exact zeros and excluded from sups and
/// fits.  The least-squares fits use diagonal entries with mn >= 1e3.
DecayScanReport decay_scan(double k, double beta, double mu,
                           const std::vector<int>& modes,
                           bool diag_only = false,
                           const std::vector<int>& band_offsets = {2, 8, 32},
                           double abs_tol = oscint::kDefaultTol,
                           unsigned threads = 0);

}  // namespace oscham::decay
