#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oscham/errors.hpp"
#include "oscham/hermite.hpp"
#include "oscham/quadrature.hpp"
#include "reference_tables.inc"

using namespace oscham;
namespace ref = oscham_ref;

namespace {
double rel_gap(double got, long double want) {
  return std::abs(static_cast<double>(got - want)) /
         std::max(std::abs(static_cast<double>(want)), 1e-300);
}
}  // namespace

TEST_SUITE("hermite") {

TEST_CASE("mode bundle and eigenvalues") {
  CHECK(hermite::eigenvalue(1) == 1.0);
  CHECK(hermite::eigenvalue(7) == 13.0);
  const auto md = hermite::mode(100);
  CHECK(md.m == 100);
  CHECK(md.lambda == 199.0);
  CHECK(md.turning_point == doctest::Approx(std::sqrt(199.0)).epsilon(1e-15));
  CHECK_THROWS_AS(hermite::mode(0), ValidationError);
  CHECK_THROWS_AS((void)hermite::eigenvalue(-3), ValidationError);
}

TEST_CASE("pointwise values match the pinned table") {
  for (const auto& r : ref::kHermite) {
    CAPTURE(r.m);
    CAPTURE(r.x);
    if (r.value == 0.0L) {
      // even-index mode at the origin: an exact zero of the recurrence
      CHECK(hermite::hermite_eval(r.m, r.x) == 0.0);
    } else if (std::abs(static_cast<double>(r.value)) < 1e-305) {
      // below the normal range: compare through the scaled representation
      const auto sv = hermite::hermite_eval_scaled(r.m, r.x);
      const double want_log = static_cast<double>(std::log(std::abs(r.value)));
      CHECK(sv.log_abs() == doctest::Approx(want_log).epsilon(1e-8));
      CHECK(std::signbit(sv.mantissa) == (r.value < 0.0L));
    } else {
      CHECK(rel_gap(hermite::hermite_eval(r.m, r.x), r.value) < 1e-10);
      CHECK(rel_gap(static_cast<double>(hermite::hermite_eval_ld(
                        r.m, static_cast<long double>(r.x))),
                    r.value) < 1e-12);
    }
  }
}

TEST_CASE("parity is exact in bits") {
  for (int m : {1, 2, 3, 10, 101, 500, 1000}) {
    for (double x : {0.25, 1.0, 3.753, 17.21, 40.0}) {
      const double plus = hermite::hermite_eval(m, x);
      const double minus = hermite::hermite_eval(m, -x);
      const double expect = (m % 2 == 1) ? plus : -plus;
      CHECK(minus == expect);  // bitwise, including signed zeros' magnitude
    }
  }
}

TEST_CASE("pair and batch evaluators agree with the scalar one") {
  const int mmax = 40;
  std::vector<double> batch(mmax);
  for (double x : {0.0, 0.7, 2.9, 6.3}) {
    hermite::hermite_eval_all(mmax, x, batch.data());
    for (int m = 1; m <= mmax; ++m) {
      const double single = hermite::hermite_eval(m, x);
      CHECK(std::abs(batch[m - 1] - single) <=
            1e-14 * std::max(1.0, std::abs(single)));
    }
    double hm = 0.0, hn = 0.0;
    hermite::hermite_eval_pair(7, 18, x, hm, hn);
    CHECK(hm == doctest::Approx(hermite::hermite_eval(7, x)).epsilon(1e-14));
    CHECK(hn == doctest::Approx(hermite::hermite_eval(18, x)).epsilon(1e-14));
    const hermite::PairEvaluator pe(7, 18);
    pe.eval(x, hm, hn);
    CHECK(hm == doctest::Approx(hermite::hermite_eval(7, x)).epsilon(1e-14));
    CHECK(hn == doctest::Approx(hermite::hermite_eval(18, x)).epsilon(1e-14));
  }
}

TEST_CASE("orthonormality via quadrature") {
  // same-parity pairs; full-line integral = 2 * [0, cutoff) by symmetry
  const std::pair<int, int> pairs[] = {{1, 1}, {2, 2}, {7, 7}, {10, 10},
                                       {1, 3}, {2, 4},  {5, 9}, {1, 7}};
  for (const auto& [m, n] : pairs) {
    CAPTURE(m);
    CAPTURE(n);
    const double cutoff = std::sqrt(hermite::eigenvalue(std::max(m, n))) + 10.0;
    const auto est = quadrature::adaptive<double>(
        [&](double x) {
          return hermite::hermite_eval(m, x) * hermite::hermite_eval(n, x);
        },
        0.0, cutoff, 1e-12);
    const double want = (m == n) ? 1.0 : 0.0;
    CHECK(std::abs(2.0 * est.value - want) < 1e-9);
  }
}

TEST_CASE("finite-difference eigenvalue residual") {
  // -h'' + x^2 h = lambda h, checked with a five-point second derivative
  const double d = 1e-3;
  for (int m : {3, 10, 25}) {
    const double lambda = hermite::eigenvalue(m);
    for (double x : {0.4, 1.7, 2.6}) {
      const double h0 = hermite::hermite_eval(m, x);
      const double hpp =
          (-hermite::hermite_eval(m, x - 2 * d) +
           16 * hermite::hermite_eval(m, x - d) - 30 * h0 +
           16 * hermite::hermite_eval(m, x + d) -
           hermite::hermite_eval(m, x + 2 * d)) /
          (12 * d * d);
      CHECK(std::abs(-hpp + (x * x - lambda) * h0) < 1e-5);
    }
  }
}

TEST_CASE("regime classification") {
  const double X = std::sqrt(199.0);  // mode 100
  CHECK(hermite::classify(100, 5.0).tag == hermite::RegimeTag::oscillatory);
  CHECK(hermite::classify(100, -5.0).tag == hermite::RegimeTag::oscillatory);
  CHECK(hermite::classify(100, X + 0.01).tag == hermite::RegimeTag::turning);
  CHECK(hermite::classify(100, X - 0.01).tag == hermite::RegimeTag::turning);
  CHECK(hermite::classify(100, 17.0).tag == hermite::RegimeTag::evanescent);
  // default half-width is X^{-1/3}
  CHECK(hermite::classify(100, 5.0).half_width ==
        doctest::Approx(std::pow(X, -1.0 / 3.0)).epsilon(1e-12));
  // explicit half-width overrides the default
  CHECK(hermite::classify(100, X + 0.01, 0.005).tag ==
        hermite::RegimeTag::evanescent);
}

TEST_CASE("action integrals match the pinned table") {
  for (const auto& r : ref::kZeta) {
    CAPTURE(r.m);
    CAPTURE(r.x);
    const double lambda = hermite::eigenvalue(r.m);
    const double X = std::sqrt(lambda);
    const double got = (r.x <= X) ? hermite::zeta(r.m, r.x)
                                  : hermite::zeta_evanescent(r.m, r.x);
    // near the turning point the closed form cancels at scale lambda
    const double tol =
        1e-12 * std::max({1.0, lambda, std::abs(static_cast<double>(r.value))});
    CHECK(std::abs(got - static_cast<double>(r.value)) < tol);
  }
}

TEST_CASE("action integral endpoints and domains") {
  CHECK(hermite::zeta(1, 0.0) ==
        doctest::Approx(-std::numbers::pi / 4).epsilon(1e-15));
  CHECK(hermite::zeta(3, 0.0) ==
        doctest::Approx(-5.0 * std::numbers::pi / 4).epsilon(1e-15));
  CHECK(std::abs(hermite::zeta(5, 3.0)) < 1e-14);         // X_5 = 3 exactly
  CHECK(std::abs(hermite::zeta_evanescent(5, 3.0)) < 1e-14);
  CHECK_THROWS_AS((void)hermite::zeta(1, -0.1), ValidationError);
  CHECK_THROWS_AS((void)hermite::zeta(1, 1.2), ValidationError);
  CHECK_THROWS_AS((void)hermite::zeta_evanescent(1, 0.9), ValidationError);
}

TEST_CASE("action derivative: closed form and finite differences") {
  CHECK(hermite::zeta_deriv(5, 1.0) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(hermite::zeta_deriv(5, 5.0) == doctest::Approx(4.0).epsilon(1e-15));
  const double d = 1e-6;
  for (double x : {3.0, 7.0, 11.0}) {
    const double fd =
        (hermite::zeta(100, x + d) - hermite::zeta(100, x - d)) / (2 * d);
    CHECK(fd == doctest::Approx(hermite::zeta_deriv(100, x)).epsilon(1e-7));
  }
}

TEST_CASE("turning-point approximant matches the pinned table") {
  for (const auto& r : ref::kLanger) {
    CAPTURE(r.m);
    CAPTURE(r.x);
    const double got = hermite::langer_psi1(r.m, r.x).real();
    CHECK(rel_gap(got, r.value) < 1e-10);
  }
}

TEST_CASE("turning-point approximant guards its window") {
  const double X = std::sqrt(199.0);
  const double w = std::pow(X, -1.0 / 3.0) / 8.0;
  CHECK_THROWS_AS((void)hermite::langer_psi1(100, X), TurningPointProximity);
  CHECK_THROWS_AS((void)hermite::langer_psi1(100, X + 0.5 * w),
                  TurningPointProximity);
  CHECK_THROWS_AS((void)hermite::langer_psi1(100, X - 0.5 * w),
                  TurningPointProximity);
  // just outside the window the bundle is usable and close to h_m
  for (double x : {X - 1.5 * w, X + 1.5 * w}) {
    const auto b = hermite::langer(100, x);
    CHECK(b.mode.m == 100);
    CHECK(b.value == hermite::langer_psi1(100, x));
    CHECK((x < X ? b.zeta <= 0.0 : b.zeta >= 0.0));
    const double h = hermite::hermite_eval(100, x);
    CHECK(std::abs(b.value.real() - h) < 1e-2 * std::abs(b.value));
  }
}

TEST_CASE("scaled evaluation tracks deep underflow") {
  // moderate point: scaled and plain evaluations agree
  const auto sv = hermite::hermite_eval_scaled(10, 2.0);
  CHECK(sv.value() == doctest::Approx(hermite::hermite_eval(10, 2.0)).epsilon(1e-14));
  // far evanescent point: plain value underflows, log_abs stays finite
  const auto deep = hermite::hermite_eval_scaled(4, 42.0);
  CHECK(hermite::hermite_eval(4, 42.0) == 0.0);
  CHECK(deep.value() == 0.0);
  CHECK(deep.log_abs() < -708.0);
  CHECK(std::isfinite(deep.log_abs()));
}

}  // TEST_SUITE
