#pragma once

#include <filesystem>
#include <vector>

#include "amusic/types.hpp"

namespace amusic {

/// 8-bit grayscale raster, intensities scaled to [0, 1]; rows = height.
using GrayImage = RowMatrixX<float>;

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Bilinear resample with pixel-center alignment.
GrayImage resize_bilinear(const GrayImage& image, Index width, Index height);

/// Regular files in `dir` with extension `ext`, sorted by filename.
std::vector<std::filesystem::path> list_files_sorted(const std::filesystem::path& dir,
                                                     const std::string& ext);

}  // namespace amusic
