#include "amusic/hog.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "amusic/error.hpp"

namespace amusic {

void HogConfig::validate() const {
  if (width <= 0 || height <= 0 || cell <= 0 || bins <= 0 || block <= 0) {
    throw Error(ErrorCode::InvalidArgument, "HOG sizes must be positive");
  }
  if (width % cell != 0 || height % cell != 0) {
    throw Error(ErrorCode::InvalidArgument, "HOG resize " + std::to_string(width) + "x" +
                                                std::to_string(height) +
                                                " not divisible by cell " + std::to_string(cell));
  }
  if (!(epsilon > 0)) throw Error(ErrorCode::InvalidArgument, "HOG epsilon must be positive");
  if (cells_x() < block || cells_y() < block) {
    throw Error(ErrorCode::ImageTooSmall, "cell grid " + std::to_string(cells_x()) + "x" +
                                              std::to_string(cells_y()) +
                                              " smaller than one block");
  }
}

RowMatrix hog_cell_histograms(const GrayImage& image, const HogConfig& cfg) {
  cfg.validate();
  if (image.size() == 0) throw Error(ErrorCode::BadImage, "empty image");
  const GrayImage img = resize_bilinear(image, cfg.width, cfg.height);
  const Index w = cfg.width;
  const Index h = cfg.height;
  const Scalar bin_width = 180.0 / static_cast<Scalar>(cfg.bins);

  RowMatrix hist = RowMatrix::Zero(cfg.cells_y() * cfg.cells_x(), cfg.bins);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      // centered differences, replicated border
      const Scalar gx = static_cast<Scalar>(img(y, std::min(x + 1, w - 1))) -
                        static_cast<Scalar>(img(y, std::max<Index>(x - 1, 0)));
      const Scalar gy = static_cast<Scalar>(img(std::min(y + 1, h - 1), x)) -
                        static_cast<Scalar>(img(std::max<Index>(y - 1, 0), x));
      const Scalar mag = std::hypot(gx, gy);
      if (mag == 0) continue;
      Scalar angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      // bin k is centered on k * bin_width; vote splits linearly between neighbours
      const Scalar pos = angle / bin_width;
      const Index lo = static_cast<Index>(std::floor(pos)) % cfg.bins;
      const Index hi = (lo + 1) % cfg.bins;
      const Scalar frac = pos - std::floor(pos);
      const Index cell_index = (y / cfg.cell) * cfg.cells_x() + (x / cfg.cell);
      hist(cell_index, lo) += mag * (1 - frac);
      hist(cell_index, hi) += mag * frac;
    }
  }
  return hist;
}

Descriptor hog_descriptor(const GrayImage& image, const HogConfig& cfg) {
  const RowMatrix hist = hog_cell_histograms(image, cfg);
  const Index block_len = cfg.block * cfg.block * cfg.bins;
  Descriptor out(cfg.descriptor_length());
  Index at = 0;
  VectorX<Scalar> block(block_len);
  for (Index by = 0; by < cfg.blocks_y(); ++by) {
    for (Index bx = 0; bx < cfg.blocks_x(); ++bx) {
      Index k = 0;
      for (Index cy = by; cy < by + cfg.block; ++cy) {
        for (Index cx = bx; cx < bx + cfg.block; ++cx) {
          block.segment(k, cfg.bins) = hist.row(cy * cfg.cells_x() + cx).transpose();
          k += cfg.bins;
        }
      }
      out.segment(at, block_len) =
          block / std::sqrt(block.squaredNorm() + cfg.epsilon * cfg.epsilon);
      at += block_len;
    }
  }
  return out;
}

}  // namespace amusic
