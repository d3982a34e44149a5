// bessel.hpp — Bessel functions of order ±1/3 on the positive real axis.
//
// These are exactly the kernels needed by the uniform turning-point
// approximant: J_{±1/3} and Y_{1/3} on the oscillatory side, K_{1/3} on the
// evanescent side, and H^{(1)}_{1/3} = J_{1/3} + i·Y_{1/3}.
//
// Evaluation strategy (s > 0):
//   * s <= 9 : ascending power series in long double. The J series loses ~3
//     digits to cancellation near s = 9 and the K combination
//     pi/sqrt(3)·(I_{-1/3} - I_{1/3}) loses ~7; long double keeps >= 11.
//   * s > 9  : Hankel asymptotic expansions (P,Q series for J/Y, the
//     exponential series for K) truncated at the smallest term; the optimal
//     remainder ~ e^{-2s} <= 1.5e-8 at the switchover and falls rapidly.
// Accuracy contract: >= 8 significant digits everywhere on s > 0 (verified
// against frozen high-precision tables in the unit tests).

#pragma once

#include <complex>

namespace oscham::bessel {

// Order +1/3 and -1/3 Bessel functions of the first kind.
double j_plus_third(double s);
double j_minus_third(double s);

// Order 1/3 Bessel function of the second kind,
// Y_{1/3} = (J_{1/3} - 2 J_{-1/3}) / sqrt(3).
double y_plus_third(double s);

// Order 1/3 modified Bessel function of the second kind,
// K_{1/3} = pi/sqrt(3) · (I_{-1/3} - I_{1/3}).
double k_plus_third(double s);

// Outgoing Hankel function H^{(1)}_{1/3} = J_{1/3} + i Y_{1/3}.
std::complex<double> hankel1_plus_third(double s);

}  // namespace oscham::bessel
