#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "amusic/types.hpp"

namespace amusic {

// VPRD v1 layout, all integers little-endian:
//   0  "VPRD"      magic
//   4  u8  version (1)
//   5  u8  dtype   (1 = f32)
//   6  u8  role    (0 = descriptors, 1 = scores)
//   7  u32 rows
//   11 u32 cols
//   15 rows*cols f32, row-major
// Score matrices hold one query per row and one reference per column.

enum class VprdRole : std::uint8_t { Descriptors = 0, Scores = 1 };

inline constexpr std::size_t kVprdHeaderSize = 15;

/// Row-major matrix as stored in a VPRD file; one descriptor (or score vector) per row.
struct DescriptorMatrix {
  VprdRole role = VprdRole::Descriptors;
  RowMatrix data;

  Index rows() const { return data.rows(); }
  Index dims() const { return data.cols(); }
};

std::vector<std::uint8_t> encode_vprd(const DescriptorMatrix& m);
DescriptorMatrix decode_vprd(const std::vector<std::uint8_t>& bytes);

DescriptorMatrix load_vprd(const std::filesystem::path& path);
void save_vprd(const std::filesystem::path& path, const DescriptorMatrix& m);

/// Headerless CSV score matrix: one query per line, comma-separated reals.
RowMatrix load_score_csv(const std::filesystem::path& path);
void save_score_csv(const std::filesystem::path& path, const RowMatrix& m);

/// Loads a score matrix from VPRD (any role) or CSV, chosen by extension.
RowMatrix load_score_matrix(const std::filesystem::path& path);

}  // namespace amusic
