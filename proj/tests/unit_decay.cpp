#include <doctest.h>

#include <cmath>
#include <vector>

#include "oscham/decay.hpp"
#include "oscham/errors.hpp"
#include "reference_tables.inc"

using namespace oscham;
namespace ref = oscham_ref;

TEST_SUITE("decay") {

TEST_CASE("weight window per frequency regime") {
  CHECK(decay::mu_window(1.5) == doctest::Approx(1.5 / 6.0).epsilon(1e-15));
  CHECK(decay::mu_window(1.3) == doctest::Approx(1.3 / 6.0).epsilon(1e-15));
  CHECK(decay::mu_window(2.0) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(decay::mu_window(3.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(decay::mu_window(4.0) == doctest::Approx(2.0 / 14.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)decay::mu_window(1.0), ValidationError);
  CHECK_THROWS_AS((void)decay::mu_window(0.5), ValidationError);
}

TEST_CASE("admissibility is the half-open window") {
  CHECK(decay::mu_admissible(2.0, 0.0));
  CHECK(decay::mu_admissible(2.0, 2.0 / 9.0 - 1e-12));
  CHECK(!decay::mu_admissible(2.0, 2.0 / 9.0));
  CHECK(!decay::mu_admissible(2.0, 0.3));
  CHECK(!decay::mu_admissible(2.0, -1e-12));
  CHECK(decay::l_exponent(2.0, 0.0) == doctest::Approx(1.0 / 18.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)decay::l_exponent(2.0, 0.3), ValidationError);
}

TEST_CASE("exponent and constant match the pinned table") {
  for (const auto& r : ref::kDecayLaw) {
    CAPTURE(r.beta);
    CAPTURE(r.mu);
    CAPTURE(r.k);
    const auto law = decay::decay_law(r.k, r.beta, r.mu);
    CHECK(law.l_star ==
          doctest::Approx(static_cast<double>(r.l_star)).epsilon(1e-15));
    CHECK(law.c == doctest::Approx(static_cast<double>(r.c_k)).epsilon(1e-15));
    CHECK(law.beta == r.beta);
    CHECK(law.mu == r.mu);
    CHECK(law.k == r.k);
  }
}

TEST_CASE("frequency-constant branches") {
  // 1 < beta < 2: the cube-root, 1/|k| and |k|^{1/(4-2 beta)} competition
  const double b = 1.5, k = 0.25;
  const double want = std::max(
      {std::pow(std::abs(b * (b - 1) * (b - 2) * k), -1.0 / 3.0), 1.0 / k,
       std::pow(k, 1.0 / (4.0 - 2.0 * b))});
  CHECK(decay::c_k_beta(k, b) == doctest::Approx(want).epsilon(1e-14));
  CHECK(decay::c_k_beta(2.0, 2.0) == 1.0);       // beta = 2, |k| >= 1
  CHECK(decay::c_k_beta(0.5, 2.0) == 2.0);       // beta = 2, |k| < 1
  CHECK(decay::c_k_beta(0.1, 2.5) == 4.0);       // beta > 2: 1/(beta |k|)
  CHECK(decay::c_k_beta(-3.0, 4.0) == 1.0);
  CHECK_THROWS_AS((void)decay::decay_law(0.0, 2.0, 0.0), ValidationError);
}

TEST_CASE("scan grid, compensation, and certificates") {
  const std::vector<int> modes{4, 8, 16, 32, 64};
  const auto rep = decay::decay_scan(1.0, 2.0, 0.0, modes, false, {2, 8}, 1e-10);
  CHECK(rep.law.l_star == doctest::Approx(1.0 / 18.0).epsilon(1e-15));
  CHECK(rep.grid.size() == modes.size() * 3);
  CHECK(rep.envelope_sup > 0.0);
  CHECK(rep.pass);
  CHECK(rep.compensated_slope <= 0.02);
  for (const auto& row : rep.grid) {
    CAPTURE(row.m);
    CAPTURE(row.n);
    CHECK(row.abs_value == std::abs(row.value));
    if (row.abs_value > 0.0) {
      const double comp = row.abs_value *
                          std::pow(double(row.m) * row.n, rep.law.l_star) /
                          rep.law.c;
      CHECK(row.compensated == doctest::Approx(comp).epsilon(1e-12));
      CHECK(row.compensated <= rep.envelope_sup / rep.law.c + 1e-12);
      CHECK(row.abs_error <=
            std::max(1e-10, 1e-8 * row.abs_value) * 1.0000001);
    }
  }
  // verify one row against a direct matrix-element call (same engine)
  const auto direct = oscint::matrix_element({8, 16, 1.0, 2.0, 0.0});
  bool found = false;
  for (const auto& row : rep.grid)
    if (row.m == 8 && row.n == 16) {
      found = true;
      CHECK(row.value == direct.value);
    }
  CHECK(found);
}

TEST_CASE("odd offsets give recorded zeros that never enter the sup") {
  const std::vector<int> modes{4, 8};
  const auto with_odd = decay::decay_scan(1.0, 2.0, 0.0, modes, false, {1}, 1e-10);
  const auto diag = decay::decay_scan(1.0, 2.0, 0.0, modes, true, {}, 1e-10);
  for (const auto& row : with_odd.grid)
    if ((row.m + row.n) % 2 == 1) {
      CHECK(row.value == std::complex<double>(0.0, 0.0));
      CHECK(row.abs_error == 0.0);
    }
  CHECK(with_odd.envelope_sup == doctest::Approx(diag.envelope_sup).epsilon(1e-15));
  CHECK(diag.grid.size() == modes.size());
}

TEST_CASE("threaded scans are bitwise deterministic") {
  const std::vector<int> modes{4, 8, 16};
  const auto a = decay::decay_scan(1.0, 1.5, 0.1, modes, false, {2}, 1e-10, 1);
  const auto b = decay::decay_scan(1.0, 1.5, 0.1, modes, false, {2}, 1e-10, 3);
  REQUIRE(a.grid.size() == b.grid.size());
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    CHECK(a.grid[i].value == b.grid[i].value);
    CHECK(a.grid[i].abs_error == b.grid[i].abs_error);
  }
  CHECK(a.envelope_sup == b.envelope_sup);
  CHECK(a.fit_slope == b.fit_slope);
}

TEST_CASE("scan input validation") {
  CHECK_THROWS_AS((void)decay::decay_scan(1.0, 2.0, 0.0, {}), ValidationError);
  CHECK_THROWS_AS((void)decay::decay_scan(1.0, 2.0, 0.0, {0, 4}),
                  ValidationError);
  CHECK_THROWS_AS((void)decay::decay_scan(0.0, 2.0, 0.0, {4}), ValidationError);
  CHECK_THROWS_AS((void)decay::decay_scan(1.0, 2.0, 0.3, {4}), ValidationError);
  CHECK_THROWS_AS((void)decay::decay_scan(1.0, 0.9, 0.0, {4}), ValidationError);
}

}  // TEST_SUITE
