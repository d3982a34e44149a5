#include "oscham/bessel.hpp"

#include <cmath>

#include "oscham/errors.hpp"

namespace oscham::bessel {

namespace {

constexpr long double kNu = 1.0L / 3.0L;
constexpr long double kFourNuSq = 4.0L / 9.0L;  // 4 nu^2
constexpr long double kGamma23 = 1.35411793942640041694528802815L;  // Gamma(2/3)
constexpr long double kGamma43 = 0.892979511569249211218564313658L; // Gamma(4/3)
constexpr long double kPi = 3.14159265358979323846264338328L;
constexpr long double kSqrt3 = 1.73205080756887729352744634151L;
// J/Y: the alternating series (in long double) beats the divergent asymptotic
// expansion until s ~ 14.  K: the series path subtracts I_{-1/3} - I_{1/3},
// which cancels like e^{2s}, so it must hand over earlier.
constexpr long double kSeriesCutJy = 14.0L;
constexpr long double kSeriesCut = 9.0L;

void require_positive(double s) {
  if (!(s > 0.0)) throw ValidationError("bessel: argument must be positive");
}

// Ascending series for J_nu or I_nu (sign = -1 for J, +1 for I).
// J_nu(s) = (s/2)^nu / Gamma(1+nu) * sum_j prod-term, term ratio sign*q/(j(j+nu)).
long double series_ji(long double s, long double nu, long double gamma_1p_nu,
                      int sign) {
  const long double q = s * s / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int j = 1; j < 200; ++j) {
    term *= static_cast<long double>(sign) * q / (j * (j + nu));
    sum += term;
    if (std::abs(term) < 1e-25L * std::abs(sum)) break;
  }
  return std::pow(s / 2.0L, nu) / gamma_1p_nu * sum;
}

// Hankel asymptotic modulus/phase series: P = 1 - a2/s^2 + a4/s^4 - ...,
// Q = a1/s - a3/s^3 + ..., with a_j = prod_{i<=j}(4nu^2-(2i-1)^2)/(j! 8^j).
void asymptotic_pq(long double s, long double& p, long double& q) {
  p = 1.0L;
  q = 0.0L;
  // running product a_j/s^j with a_j = prod_{i<=j}(4nu^2-(2i-1)^2)/(j! 8^j);
  // P/Q carry the extra (-1)^k alternation on top of the product's own signs.
  long double a_over_s = 1.0L;
  long double prev = 1e300L;
  for (int j = 1; j < 80; ++j) {
    const long double odd = 2.0L * j - 1.0L;
    a_over_s *= (kFourNuSq - odd * odd) / (8.0L * j * s);
    if (std::abs(a_over_s) >= prev) break;
    prev = std::abs(a_over_s);
    if (j % 2 == 1) {
      const int k = (j - 1) / 2;  // Q: (-1)^k a_{2k+1}/s^{2k+1}
      q += (k % 2 == 0) ? a_over_s : -a_over_s;
    } else {
      const int k = j / 2;  // P: 1 + sum (-1)^k a_{2k}/s^{2k}
      p += (k % 2 == 0) ? a_over_s : -a_over_s;
    }
  }
}

void jy_asymptotic(long double s, long double& j13, long double& y13) {
  long double p, q;
  asymptotic_pq(s, p, q);
  const long double chi = s - (kNu / 2.0L + 0.25L) * kPi;
  const long double amp = std::sqrt(2.0L / (kPi * s));
  const long double c = std::cos(chi), sn = std::sin(chi);
  j13 = amp * (p * c - q * sn);
  y13 = amp * (p * sn + q * c);
}

}  // namespace

double j_plus_third(double s) {
  require_positive(s);
  const long double x = s;
  if (x <= kSeriesCutJy) return static_cast<double>(series_ji(x, kNu, kGamma43, -1));
  long double j13, y13;
  jy_asymptotic(x, j13, y13);
  return static_cast<double>(j13);
}

double j_minus_third(double s) {
  require_positive(s);
  const long double x = s;
  if (x <= kSeriesCutJy) return static_cast<double>(series_ji(x, -kNu, kGamma23, -1));
  // connection: J_{-1/3} = (J_{1/3} - sqrt(3) Y_{1/3}) / 2 ... derived from
  // Y_nu = (J_nu cos(nu pi) - J_{-nu}) / sin(nu pi) with nu = 1/3:
  // J_{-1/3} = J_{1/3} cos(pi/3) - Y_{1/3} sin(pi/3) = J_{1/3}/2 - Y_{1/3} sqrt(3)/2.
  long double j13, y13;
  jy_asymptotic(x, j13, y13);
  return static_cast<double>(0.5L * j13 - 0.5L * kSqrt3 * y13);
}

double y_plus_third(double s) {
  require_positive(s);
  const long double x = s;
  if (x <= kSeriesCutJy) {
    const long double j13 = series_ji(x, kNu, kGamma43, -1);
    const long double jm13 = series_ji(x, -kNu, kGamma23, -1);
    // Y_{1/3} = (J_{1/3} cos(pi/3) - J_{-1/3}) / sin(pi/3) = (J_{1/3} - 2 J_{-1/3})/sqrt(3)
    return static_cast<double>((j13 - 2.0L * jm13) / kSqrt3);
  }
  long double j13, y13;
  jy_asymptotic(x, j13, y13);
  return static_cast<double>(y13);
}

double k_plus_third(double s) {
  require_positive(s);
  const long double x = s;
  if (x <= kSeriesCut) {
    const long double i13 = series_ji(x, kNu, kGamma43, +1);
    const long double im13 = series_ji(x, -kNu, kGamma23, +1);
    // K_nu = pi/(2 sin(nu pi)) (I_{-nu} - I_nu); sin(pi/3) = sqrt(3)/2
    return static_cast<double>(kPi / kSqrt3 * (im13 - i13));
  }
  // K_nu(s) ~ sqrt(pi/(2s)) e^{-s} [1 + sum_j prod_{i<=j}(4nu^2-(2i-1)^2)/(j! (8s)^j)]
  long double term = 1.0L, sum = 1.0L, prev = 1e300L;
  for (int j = 1; j < 80; ++j) {
    const long double odd = 2.0L * j - 1.0L;
    term *= (kFourNuSq - odd * odd) / (8.0L * j * x);
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    sum += term;
  }
  return static_cast<double>(std::sqrt(kPi / (2.0L * x)) * std::exp(-x) * sum);
}

std::complex<double> hankel1_plus_third(double s) {
  require_positive(s);
  const long double x = s;
  if (x <= kSeriesCutJy) {
    const long double j13 = series_ji(x, kNu, kGamma43, -1);
    const long double jm13 = series_ji(x, -kNu, kGamma23, -1);
    const long double y13 = (j13 - 2.0L * jm13) / kSqrt3;
    return {static_cast<double>(j13), static_cast<double>(y13)};
  }
  long double j13, y13;
  jy_asymptotic(x, j13, y13);
  return {static_cast<double>(j13), static_cast<double>(y13)};
}

}  // namespace oscham::bessel
