#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

namespace amusic {

using Scalar = double;
using Index = Eigen::Index;

template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using RowMatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One similarity score per reference place.
using ScoreVector = VectorX<Scalar>;
using RowMatrix = RowMatrixX<Scalar>;

/// Position of a technique in the ensemble (registration order).
using TechniqueSlot = std::size_t;

}  // namespace amusic
