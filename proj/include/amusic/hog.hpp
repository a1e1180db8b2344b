#pragma once

#include "amusic/image.hpp"
#include "amusic/types.hpp"

namespace amusic {

struct HogConfig {
  Index width = 128;   // resize target
  Index height = 128;
  Index cell = 8;      // pixels per cell side
  Index bins = 9;      // unsigned orientations over [0, 180)
  Index block = 2;     // cells per block side, stride one cell
  Scalar epsilon = 1e-5;

  Index cells_x() const { return width / cell; }
  Index cells_y() const { return height / cell; }
  Index blocks_x() const { return cells_x() - block + 1; }
  Index blocks_y() const { return cells_y() - block + 1; }
  Index descriptor_length() const { return blocks_x() * blocks_y() * block * block * bins; }

  /// Throws InvalidArgument for inconsistent sizes, ImageTooSmall when no block fits.
  void validate() const;
};

using Descriptor = VectorX<Scalar>;

/// Per-cell orientation histograms, shape (cells_y * cells_x) x bins, before block normalization.
RowMatrix hog_cell_histograms(const GrayImage& image, const HogConfig& cfg);

/// Histogram of oriented gradients with overlapping L2-normalized blocks.
Descriptor hog_descriptor(const GrayImage& image, const HogConfig& cfg = {});

}  // namespace amusic
