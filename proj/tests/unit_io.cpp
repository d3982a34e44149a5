#include <doctest.h>

#include <complex>
#include <cstdio>
#include <fstream>
#include <string>

#include "oscham/errors.hpp"
#include "oscham/io.hpp"
#include "oscham/operators.hpp"

using namespace oscham;
using cplx = std::complex<double>;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("unit_io_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("operator container round-trips bitwise") {
  auto Q = op::TruncatedOperator::zero(3, 2);
  Q.block({1, -2})(0, 2) = cplx(0.1234567890123456789, -3.14e-200);
  Q.block({0, 0})(1, 1) = cplx(-7.0, 0.5);
  Q.block({-1, 2})(2, 0) = cplx(1e300, -1e-300);

  TempFile f("roundtrip.op");
  io::write_operator(f.path, Q);
  const auto R = io::read_operator(f.path);
  CHECK(R.dim == Q.dim);
  CHECK(R.angle_dim == Q.angle_dim);
  REQUIRE(R.modes.size() == Q.modes.size());
  for (const auto& [j, B] : Q.modes) {
    REQUIRE(R.find(j) != nullptr);
    CHECK((B - *R.find(j)).cwiseAbs().maxCoeff() == 0.0);  // bitwise
  }
}

TEST_CASE("container magic is enforced") {
  TempFile f("magic.op");
  {
    std::ofstream out(f.path, std::ios::binary);
    out << "NOTMAGIC" << std::string(64, '\0');
  }
  CHECK_THROWS_AS((void)io::read_operator(f.path), ValidationError);
}

TEST_CASE("truncated container is rejected") {
  auto Q = op::TruncatedOperator::zero(3, 1);
  Q.block({1})(0, 0) = 1.0;
  TempFile f("trunc.op");
  io::write_operator(f.path, Q);
  const std::string whole = io::read_text_file(f.path);
  {
    std::ofstream out(f.path, std::ios::binary);
    out.write(whole.data(), static_cast<long>(whole.size()) - 9);
  }
  CHECK_THROWS_AS((void)io::read_operator(f.path), ValidationError);
  CHECK_THROWS_AS((void)io::read_operator("no_such_file.op"), ValidationError);
}

TEST_CASE("CSV formatting is fixed at 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(io::format_double(-2.5e-101) == "-2.5e-101");  // %g strips zeros
  CHECK(io::format_double(0.0) == "0");
  // every double round-trips exactly through the fixed format
  for (double v : {1.0 / 3.0, 3.141592653589793, 1e-300, -7.25}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("console formatting picks the shortest faithful decimal") {
  CHECK(io::format_short(0.1) == "0.1");
  CHECK(io::format_short(1.0) == "1");
  CHECK(io::format_short(0.25) == "0.25");
  CHECK(io::format_short(1.0 / 3.0) == "0.3333333333333333");
  for (double v : {2.0 / 7.0, 1e-300, 6.02214076e23, -0.0625}) {
    CHECK(std::stod(io::format_short(v)) == v);
  }
}

TEST_CASE("CSV line assembly") {
  CHECK(io::csv_line({"a", "b", "c"}) == "a,b,c\n");
  CHECK(io::csv_line({"1"}) == "1\n");
}

TEST_CASE("text file round-trip") {
  TempFile f("text.txt");
  io::write_text_file(f.path, "line1\nline2\n");
  CHECK(io::read_text_file(f.path) == "line1\nline2\n");
  CHECK_THROWS_AS((void)io::read_text_file("missing_file.txt"),
                  ValidationError);
}

}  // TEST_SUITE
