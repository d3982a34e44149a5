#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oscham/errors.hpp"
#include "oscham/quadrature.hpp"

using namespace oscham;

TEST_SUITE("quadrature") {

TEST_CASE("single panel is exact on low-degree polynomials") {
  const auto p5 = quadrature::gk15<double>([](double x) { return x * x * x * x * x; },
                                           0.0, 1.0);
  CHECK(p5.value == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const auto p10 = quadrature::gk15<double>(
      [](double x) { return std::pow(x, 10); }, -1.0, 2.0);
  CHECK(p10.value == doctest::Approx((std::pow(2.0, 11) + 1.0) / 11.0).epsilon(1e-14));
  CHECK(p10.error < 1e-10 * p10.value);
}

TEST_CASE("single-panel error estimate is honest on smooth integrands") {
  const auto est = quadrature::gk15<double>([](double x) { return std::exp(x); },
                                            0.0, 1.0);
  const double truth = std::exp(1.0) - 1.0;
  CHECK(std::abs(est.value - truth) <= est.error);
  CHECK(est.resabs == doctest::Approx(truth).epsilon(1e-10));
}

TEST_CASE("adaptive refinement resolves an endpoint singularity") {
  const auto est = quadrature::adaptive<double>(
      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(std::abs(est.value - 2.0) < 1e-9);
  CHECK(est.error <= 1e-10);
  CHECK(est.panels > 10);
}

TEST_CASE("adaptive integration of a complex oscillation") {
  const auto est = quadrature::adaptive<std::complex<double>>(
      [](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0,
      2.0 * std::numbers::pi, 1e-12);
  CHECK(std::abs(est.value) < 1e-11);
}

TEST_CASE("seeded partition matches a single seed") {
  const auto f = [](double x) { return x * x; };
  const auto one = quadrature::adaptive<double>(f, 0.0, 3.0, 1e-12);
  const auto two = quadrature::adaptive<double>(
      f, std::vector<std::pair<double, double>>{{0.0, 1.0}, {1.0, 3.0}}, 1e-12);
  CHECK(one.value == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(two.value == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("trace partitions the interval and carries the error budget") {
  std::vector<quadrature::TracedPanel> trace;
  const auto est = quadrature::adaptive<double>(
      [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.37) + 1e-8); }, 0.0,
      1.0, 1e-8, 20000, &trace);
  CHECK(trace.size() == est.panels);
  CHECK(trace.front().a == 0.0);
  CHECK(trace.back().b == 1.0);
  double err_sum = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i > 0) CHECK(trace[i].a == doctest::Approx(trace[i - 1].b).epsilon(1e-14));
    err_sum += trace[i].error;
  }
  CHECK(err_sum == doctest::Approx(est.error).epsilon(1e-9));
}

TEST_CASE("panel budget exhaustion raises ToleranceNotMet with the best state") {
  try {
    (void)quadrature::adaptive<double>(
        [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-14, 5);
    FAIL("expected ToleranceNotMet");
  } catch (const ToleranceNotMet& e) {
    CHECK(e.abs_error > 1e-14);
    CHECK(std::abs(e.value.real() - 2.0) < 0.5);  // partial refinement, near 2
    CHECK(e.value.imag() == 0.0);
  }
}

TEST_CASE("nonpositive tolerance is rejected") {
  CHECK_THROWS_AS((void)quadrature::adaptive<double>(
                      [](double x) { return x; }, 0.0, 1.0, 0.0),
                  ValidationError);
}

}  // TEST_SUITE
