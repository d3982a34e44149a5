// io.hpp — binary operator container and deterministic text serialization.

#pragma once

#include <string>
#include <vector>

#include "oscham/operators.hpp"

namespace oscham::io {

/// Container magic: first 8 bytes of every operator file.
inline constexpr char kMagic[8] = {'O', 'S', 'C', 'H', 'A', 'M', '0', '1'};

/// Writes Q in the little-endian binary layout documented in
/// docs/formats.md: magic, u32 angle_dim, u32 dim, u32 num_harmonics, then
/// per harmonic the int32 multi-index followed by the dim x dim block as
/// row-major (re, im) double pairs.  Harmonics are written in lexicographic
/// order.  Throws ValidationError on I/O failure.
void write_operator(const std::string& path, const op::TruncatedOperator& Q);

/// Reads a container written by write_operator; validates magic and shapes.
op::TruncatedOperator read_operator(const std::string& path);

/// Fixed 17-significant-digit decimal ("%.17g"); the CSV contract.
std::string format_double(double v);

/// Shortest decimal that round-trips to the same double; for console text.
std::string format_short(double v);

/// Joins cells with commas and appends a newline.
std::string csv_line(const std::vector<std::string>& cells);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace oscham::io
