// SPDX-License-Identifier: Apache-2.0
//
// Dense matrix files. Two formats:
//   csv  headerless decimal reals, one row per line, comma separated
//   bin  "OTMX", rows and cols as u32 little-endian, then rows*cols f64
//        little-endian values in row-major order
// Readers detect the format from the leading magic bytes.

#pragma once

#include <filesystem>
#include <string_view>

#include "gmot/types.hpp"

namespace gmot::cli {

enum class MatrixFormat { kCsv, kBinary };

MatrixFormat parse_format(std::string_view name);
std::string_view extension(MatrixFormat format);

/// Throws IoError naming the path for unreadable or malformed files.
Matrix read_matrix(const std::filesystem::path& path);

/// CSV values are written in shortest round-trip form, so both formats
/// re-read to bitwise-identical values.
void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);

Matrix parse_csv(std::string_view text, const std::string& origin);

}  // namespace gmot::cli
