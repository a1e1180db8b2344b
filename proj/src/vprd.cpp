#include "amusic/vprd.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "amusic/error.hpp"

namespace amusic {

namespace {

constexpr char kMagic[4] = {'V', 'P', 'R', 'D'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

std::string offset_str(std::size_t offset) { return "byte offset " + std::to_string(offset); }

}  // namespace

std::vector<std::uint8_t> encode_vprd(const DescriptorMatrix& m) {
  if (m.rows() < 1 || m.dims() < 1) {
    throw Error(ErrorCode::ShapeMismatch, "VPRD matrix must have at least one row and column");
  }
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() ||
      m.dims() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::ShapeMismatch, "VPRD matrix too large");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kVprdHeaderSize + 4 * static_cast<std::size_t>(m.data.size()));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kVersion);
  out.push_back(kDtypeF32);
  out.push_back(static_cast<std::uint8_t>(m.role));
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.dims()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.dims(); ++c) {
      const float f = static_cast<float>(m.data(r, c));
      if (!std::isfinite(f)) {
        throw Error(ErrorCode::NonFiniteValue, "element (" + std::to_string(r) + ", " +
                                                   std::to_string(c) + ") is not a finite f32");
      }
      put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
  }
  return out;
}

DescriptorMatrix decode_vprd(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) {
    throw Error(ErrorCode::TruncatedFile, "header ends at " + offset_str(bytes.size()));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) {
      throw Error(ErrorCode::BadMagic, "magic mismatch at " + offset_str(i));
    }
  }
  if (bytes.size() < kVprdHeaderSize) {
    throw Error(ErrorCode::TruncatedFile, "header ends at " + offset_str(bytes.size()));
  }
  if (bytes[4] != kVersion) {
    throw Error(ErrorCode::UnsupportedFormat,
                "version " + std::to_string(bytes[4]) + " at " + offset_str(4));
  }
  if (bytes[5] != kDtypeF32) {
    throw Error(ErrorCode::UnsupportedFormat,
                "dtype " + std::to_string(bytes[5]) + " at " + offset_str(5));
  }
  if (bytes[6] > 1) {
    throw Error(ErrorCode::UnsupportedFormat,
                "role " + std::to_string(bytes[6]) + " at " + offset_str(6));
  }
  const std::uint32_t rows = get_u32(bytes, 7);
  const std::uint32_t cols = get_u32(bytes, 11);
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::UnsupportedFormat, "zero rows or cols at " + offset_str(7));
  }
  const std::size_t expected =
      kVprdHeaderSize + 4 * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (bytes.size() < expected) {
    throw Error(ErrorCode::TruncatedFile, "expected " + std::to_string(expected) +
                                              " bytes, data ends at " + offset_str(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::UnsupportedFormat, "trailing data at " + offset_str(expected));
  }

  DescriptorMatrix m;
  m.role = static_cast<VprdRole>(bytes[6]);
  m.data.resize(rows, cols);
  std::size_t at = kVprdHeaderSize;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c, at += 4) {
      const float f = std::bit_cast<float>(get_u32(bytes, at));
      if (!std::isfinite(f)) {
        throw Error(ErrorCode::NonFiniteValue, "non-finite value at " + offset_str(at));
      }
      m.data(r, c) = f;
    }
  }
  return m;
}

DescriptorMatrix load_vprd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_vprd(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_vprd(const std::filesystem::path& path, const DescriptorMatrix& m) {
  const auto bytes = encode_vprd(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

RowMatrix load_score_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::vector<Scalar>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<Scalar> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      std::string field = line.substr(start, end - start);
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      field = first == std::string::npos ? "" : field.substr(first, last - first + 1);
      Scalar v = 0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw Error(ErrorCode::UnsupportedFormat, path.string() + ":" + std::to_string(line_no) +
                                                      ": bad number '" + field + "'");
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteValue,
                    path.string() + ":" + std::to_string(line_no) + ": non-finite value");
      }
      row.push_back(v);
      start = end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ShapeMismatch, path.string() + ":" + std::to_string(line_no) +
                                                ": expected " +
                                                std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::UnsupportedFormat, path.string() + ": no rows");
  RowMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    m.row(static_cast<Index>(r)) =
        Eigen::Map<const VectorX<Scalar>>(rows[r].data(), static_cast<Index>(rows[r].size()));
  }
  return m;
}

void save_score_csv(const std::filesystem::path& path, const RowMatrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  char buf[32];
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

RowMatrix load_score_matrix(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_score_csv(path);
  return load_vprd(path).data;
}

}  // namespace amusic
