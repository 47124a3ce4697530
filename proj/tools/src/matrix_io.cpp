// SPDX-License-Identifier: Apache-2.0

#include "matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

namespace gmot::cli {
namespace {

constexpr std::array<char, 4> kMagic = {'O', 'T', 'M', 'X'};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path.string() + ": read failed");
  return data;
}

std::uint32_t load_u32(const char* p) {
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(p[k]);
  return v;
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xffu));
}

double load_f64(const char* p) {
  std::uint64_t bits = 0;
  for (int k = 7; k >= 0; --k) bits = (bits << 8) | static_cast<unsigned char>(p[k]);
  return std::bit_cast<double>(bits);
}

void store_f64(std::string& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xffu));
}

Matrix parse_binary(const std::string& data, const std::string& origin) {
  if (data.size() < 12) throw IoError(origin + ": truncated OTMX header");
  const std::uint64_t rows = load_u32(data.data() + 4);
  const std::uint64_t cols = load_u32(data.data() + 8);
  const std::uint64_t expected = 12 + rows * cols * 8;
  if (data.size() != expected) {
    throw IoError(origin + ": OTMX payload is " + std::to_string(data.size()) + " bytes, expected " +
                  std::to_string(expected));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const char* p = data.data() + 12;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j, p += 8) m(i, j) = load_f64(p);
  }
  return m;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

MatrixFormat parse_format(std::string_view name) {
  if (name == "csv") return MatrixFormat::kCsv;
  if (name == "bin") return MatrixFormat::kBinary;
  throw UsageError("unknown matrix format '" + std::string(name) + "' (expected csv or bin)");
}

std::string_view extension(MatrixFormat format) {
  return format == MatrixFormat::kCsv ? ".csv" : ".bin";
}

Matrix parse_csv(std::string_view text, const std::string& origin) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = trim(text.substr(0, end));
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++line_no;
    if (line.empty()) continue;
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = line.find(',');
      const std::string_view field = trim(line.substr(0, comma));
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw IoError(origin + ":" + std::to_string(line_no) + ": malformed number '" +
                      std::string(field) + "'");
      }
      values.push_back(x);
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw IoError(origin + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                    " values, found " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw IoError(origin + ": no data");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::memcpy(m.data(), values.data(), values.size() * sizeof(double));
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  if (data.size() >= 4 && std::memcmp(data.data(), kMagic.data(), 4) == 0) {
    return parse_binary(data, path.string());
  }
  return parse_csv(data, path.string());
}

void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format) {
  std::string out;
  if (format == MatrixFormat::kBinary) {
    constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
    if (static_cast<std::uint64_t>(m.rows()) > kMax || static_cast<std::uint64_t>(m.cols()) > kMax) {
      throw SizeError(path.string() + ": matrix too large for OTMX");
    }
    out.reserve(12 + static_cast<std::size_t>(m.size()) * 8);
    out.append(kMagic.data(), kMagic.size());
    store_u32(out, static_cast<std::uint32_t>(m.rows()));
    store_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) store_f64(out, m(i, j));
  } else {
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j > 0) out.push_back(',');
        const auto res = std::to_chars(buf, buf + sizeof buf, m(i, j));
        out.append(buf, res.ptr);
      }
      out.push_back('\n');
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(path.string() + ": cannot open for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError(path.string() + ": write failed");
}

}  // namespace gmot::cli
