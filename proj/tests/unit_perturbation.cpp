#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>

#include "oscham/errors.hpp"
#include "oscham/oscint.hpp"
#include "oscham/perturbation.hpp"

using namespace oscham;
using cplx = std::complex<double>;

namespace {

const char* kBasicSpec = R"({
  "beta": 2.0, "mu": 0.0, "n": 1, "sigma": 0.5,
  "Lambda": [1.0],
  "coeffs": {
    "1": {
      "a": [[1, 0.5, 0.0], [-1, 0.5, 0.0]],
      "b": [[0, 1.0, 0.0]]
    }
  }
})";

std::string patched(const std::string& what, const std::string& with) {
  std::string s = kBasicSpec;
  const auto pos = s.find(what);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, what.size(), with);
}

}  // namespace

TEST_SUITE("perturbation") {

TEST_CASE("happy-path parse") {
  const auto spec = pert::parse_spec(kBasicSpec);
  CHECK(spec.beta == 2.0);
  CHECK(spec.mu == 0.0);
  CHECK(spec.angle_dim == 1);
  CHECK(spec.sigma == 0.5);
  REQUIRE(spec.lambda.size() == 1);
  CHECK(spec.lambda[0] == 1.0);
  REQUIRE(spec.coeffs.count(1.0) == 1);
  const auto& ch = spec.coeffs.at(1.0);
  REQUIRE(ch.a.size() == 2);
  REQUIRE(ch.b.size() == 1);
  CHECK(ch.b[0].j == op::Harmonic{0});
  CHECK(ch.b[0].c == cplx(1.0, 0.0));
  // envelope: max(0.5 e^{0.5}, 1.0) = 1.0
  CHECK(spec.envelope_constant == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bundled configuration loads") {
  const auto spec = pert::load_spec(std::string(OSCHAM_CONFIG_DIR) +
                                    "/basic_cos.json");
  CHECK(spec.beta == 2.0);
  CHECK(spec.angle_dim == 1);
  CHECK(spec.coeffs.count(1.0) == 1);
}

TEST_CASE("validation failures name the problem") {
  CHECK_THROWS_AS((void)pert::parse_spec("not json"), ValidationError);
  CHECK_THROWS_AS((void)pert::parse_spec(R"({"beta": 2.0})"), ValidationError);
  CHECK_THROWS_AS((void)pert::parse_spec(patched("\"beta\": 2.0", "\"beta\": 1.0")),
                  ValidationError);
  CHECK_THROWS_AS((void)pert::parse_spec(patched("\"mu\": 0.0", "\"mu\": -0.5")),
                  ValidationError);
  CHECK_THROWS_AS((void)pert::parse_spec(patched("\"n\": 1", "\"n\": 0")),
                  ValidationError);
  CHECK_THROWS_AS(
      (void)pert::parse_spec(patched("\"sigma\": 0.5", "\"sigma\": 0.0")),
      ValidationError);
  CHECK_THROWS_AS(
      (void)pert::parse_spec(patched("\"Lambda\": [1.0]", "\"Lambda\": []")),
      ValidationError);
  CHECK_THROWS_AS((void)pert::parse_spec(
                      patched("\"Lambda\": [1.0]", "\"Lambda\": [1.0, 1.0]")),
                  ValidationError);
  // coefficient key must be a listed strength
  CHECK_THROWS_AS((void)pert::parse_spec(patched("\"1\":", "\"2\":")),
                  ValidationError);
  // row must have angle_dim + 2 entries
  CHECK_THROWS_AS((void)pert::parse_spec(patched("[0, 1.0, 0.0]", "[0, 1.0]")),
                  ValidationError);
  // harmonics must be integral
  CHECK_THROWS_AS(
      (void)pert::parse_spec(patched("[0, 1.0, 0.0]", "[0.5, 1.0, 0.0]")),
      ValidationError);
  // duplicate harmonic inside one family
  CHECK_THROWS_AS((void)pert::parse_spec(patched("[[1, 0.5, 0.0], [-1, 0.5, 0.0]]",
                                                 "[[1, 0.5, 0.0], [1, 0.5, 0.0]]")),
                  ValidationError);
  // reality: c_{-j} must equal conj(c_j)
  CHECK_THROWS_AS((void)pert::parse_spec(patched("[[1, 0.5, 0.0], [-1, 0.5, 0.0]]",
                                                 "[[1, 0.5, 0.0]]")),
                  ValidationError);
  CHECK_THROWS_AS((void)pert::parse_spec(patched("[-1, 0.5, 0.0]",
                                                 "[-1, 0.4, 0.0]")),
                  ValidationError);
}

TEST_CASE("coefficient evaluation") {
  const auto spec = pert::parse_spec(kBasicSpec);
  const auto& ch = spec.coeffs.at(1.0);
  for (double theta : {0.0, 0.7, -2.1}) {
    const cplx a = pert::eval_coeff(ch.a, {theta});
    CHECK(a.real() == doctest::Approx(std::cos(theta)).epsilon(1e-14));
    CHECK(std::abs(a.imag()) < 1e-15);
    const cplx b = pert::eval_coeff(ch.b, {theta});
    CHECK(b == cplx(1.0, 0.0));
  }
}

TEST_CASE("serialization round-trip") {
  const auto spec = pert::parse_spec(kBasicSpec);
  const auto again = pert::parse_spec(pert::spec_to_json(spec));
  CHECK(again.beta == spec.beta);
  CHECK(again.mu == spec.mu);
  CHECK(again.angle_dim == spec.angle_dim);
  CHECK(again.sigma == spec.sigma);
  CHECK(again.lambda == spec.lambda);
  REQUIRE(again.coeffs.count(1.0) == 1);
  const auto& c0 = spec.coeffs.at(1.0);
  const auto& c1 = again.coeffs.at(1.0);
  REQUIRE(c1.a.size() == c0.a.size());
  for (std::size_t i = 0; i < c0.a.size(); ++i) {
    CHECK(c1.a[i].j == c0.a[i].j);
    CHECK(c1.a[i].c == c0.a[i].c);
  }
  CHECK(again.envelope_constant == spec.envelope_constant);
}

TEST_CASE("assembly wires the sine and cosine blocks") {
  const auto spec = pert::parse_spec(kBasicSpec);
  double max_err = -1.0;
  const auto P = pert::assemble_P(spec, 6, 1e-11, 0, &max_err);
  CHECK(P.dim == 6);
  CHECK(P.angle_dim == 1);
  CHECK(max_err >= 0.0);
  CHECK(max_err <= 1e-9);  // well inside max(abs_tol, 1e-8 |value|)
  CHECK(P.reality_defect() < 1e-15);
  CHECK(P.symmetry_defect() < 1e-15);

  // b_1 == 1 lands the cosine block on harmonic 0, a_1 == cos theta spreads
  // the sine block as half weight on harmonics +-1
  REQUIRE(P.find({0}) != nullptr);
  REQUIRE(P.find({1}) != nullptr);
  REQUIRE(P.find({-1}) != nullptr);
  const auto i11 = oscint::matrix_element({1, 1, 1.0, 2.0, 0.0}, 1e-11);
  const auto i13 = oscint::matrix_element({1, 3, 1.0, 2.0, 0.0}, 1e-11);
  CHECK(std::abs((*P.find({0}))(0, 0).real() - i11.value.real()) < 1e-9);
  CHECK(std::abs((*P.find({0}))(0, 0).imag()) < 1e-15);
  CHECK(std::abs((*P.find({1}))(0, 2) - cplx(0.5 * i13.value.imag(), 0.0)) <
        1e-9);
  // odd-parity entries are exact zeros
  CHECK((*P.find({0}))(0, 1) == cplx(0.0, 0.0));

  // pointwise: P(theta) = a(theta) S_sin + b(theta) S_cos on a spot entry
  const double theta = 0.9;
  const auto Pt = P.at({theta});
  const double want =
      std::cos(theta) * i13.value.imag() + 1.0 * i13.value.real();
  CHECK(std::abs(Pt(0, 2) - cplx(want, 0.0)) < 1e-8);
}

TEST_CASE("assembly is deterministic across thread counts") {
  const auto spec = pert::parse_spec(kBasicSpec);
  const auto P1 = pert::assemble_P(spec, 5, 1e-11, 1);
  const auto P3 = pert::assemble_P(spec, 5, 1e-11, 3);
  REQUIRE(P1.modes.size() == P3.modes.size());
  for (const auto& [j, B] : P1.modes) {
    REQUIRE(P3.find(j) != nullptr);
    CHECK((B - *P3.find(j)).cwiseAbs().maxCoeff() == 0.0);  // bitwise equal
  }
}

TEST_CASE("assembly validation") {
  const auto spec = pert::parse_spec(kBasicSpec);
  CHECK_THROWS_AS((void)pert::assemble_P(spec, 0), ValidationError);
  CHECK_THROWS_AS((void)pert::assemble_P(spec, 4, -1.0), ValidationError);
}

}  // TEST_SUITE
