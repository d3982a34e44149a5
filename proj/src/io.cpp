// io.cpp — operator container serialization and text helpers.

#include "oscham/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "the container format is defined little-endian");

namespace oscham::io {

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_i32(std::ofstream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_f64(std::ofstream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t get_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

std::int32_t get_i32(std::ifstream& in) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

double get_f64(std::ifstream& in) {
  double v = 0.0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void write_operator(const std::string& path, const op::TruncatedOperator& Q) {
  if (Q.dim < 1 || Q.angle_dim < 1)
    throw ValidationError("container: operator has empty shape");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("container: cannot open '" + path + "'");
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(Q.angle_dim));
  put_u32(out, static_cast<std::uint32_t>(Q.dim));
  put_u32(out, static_cast<std::uint32_t>(Q.modes.size()));
  // std::map iterates harmonics in lexicographic order already
  for (const auto& [j, block] : Q.modes) {
    for (int c : j) put_i32(out, c);
    for (int r = 0; r < Q.dim; ++r) {
      for (int c = 0; c < Q.dim; ++c) {
        put_f64(out, block(r, c).real());
        put_f64(out, block(r, c).imag());
      }
    }
  }
  out.flush();
  if (!out) throw ValidationError("container: write failed for '" + path + "'");
}

op::TruncatedOperator read_operator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("container: cannot open '" + path + "'");
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ValidationError("container: bad magic in '" + path + "'");
  const std::uint32_t angle_dim = get_u32(in);
  const std::uint32_t dim = get_u32(in);
  const std::uint32_t num = get_u32(in);
  if (!in || angle_dim < 1 || angle_dim > 64 || dim < 1 || dim > 1000000 ||
      num > 10000000)
    throw ValidationError("container: implausible header in '" + path + "'");
  op::TruncatedOperator Q =
      op::TruncatedOperator::zero(static_cast<int>(dim),
                                  static_cast<int>(angle_dim));
  for (std::uint32_t h = 0; h < num; ++h) {
    op::Harmonic j(angle_dim);
    for (std::uint32_t c = 0; c < angle_dim; ++c) j[c] = get_i32(in);
    Eigen::MatrixXcd block(dim, dim);
    for (std::uint32_t r = 0; r < dim; ++r) {
      for (std::uint32_t c = 0; c < dim; ++c) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        block(r, c) = {re, im};
      }
    }
    if (!in)
      throw ValidationError("container: truncated file '" + path + "'");
    if (Q.modes.count(j) != 0)
      throw ValidationError("container: duplicate harmonic in '" + path + "'");
    Q.modes.emplace(std::move(j), std::move(block));
  }
  return Q;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  for (int prec = 1; prec <= 16; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("io: cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw ValidationError("io: write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("io: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oscham::io
