#pragma once

#include <cmath>
#include <deque>
#include <vector>

#include "amusic/error.hpp"
#include "amusic/types.hpp"

namespace amusic {

struct NormalizationParams {
  Scalar mean = 0;
  Scalar std_dev = 0;  // population
};

struct NormalizedScores {
  ScoreVector values;
  NormalizationParams params;
  /// Set when the input was flat (std_dev == 0); `values` is then all zeros.
  bool degenerate = false;
};

template <typename Derived>
NormalizationParams normalization_params(const Eigen::MatrixBase<Derived>& raw) {
  const Scalar n = static_cast<Scalar>(raw.size());
  const Scalar mean = raw.template cast<Scalar>().sum() / n;
  const Scalar var = (raw.template cast<Scalar>().array() - mean).square().sum() / n;
  return {mean, std::sqrt(var)};
}

/// Z-score a score vector against its own mean and population standard deviation.
template <typename Derived>
NormalizedScores normalize_scores(const Eigen::MatrixBase<Derived>& raw) {
  if (raw.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "normalize_scores needs at least 2 scores");
  }
  if (!raw.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "score vector contains NaN or infinity");
  }
  NormalizedScores out;
  out.params = normalization_params(raw);
  if (!(out.params.std_dev > 0)) {
    out.values = ScoreVector::Zero(raw.size());
    out.degenerate = true;
    return out;
  }
  out.values = (raw.template cast<Scalar>().array() - out.params.mean) / out.params.std_dev;
  return out;
}

/// Lowest index among the maxima.
template <typename Derived>
Index argmax(const Eigen::MatrixBase<Derived>& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

enum class StreamMode { Raw, Normalized };

/// Time-ordered, append-only matrix of score vectors for one technique.
///
/// Rows carry global query indices starting at `origin()`. A stream that begins
/// mid-run (a technique activated late) has a non-zero origin and no history
/// before it. Appended rows are never mutated; readers on other threads must
/// still synchronize with the single writer around `append`.
class ScoreStream {
 public:
  explicit ScoreStream(StreamMode mode = StreamMode::Normalized, Index origin = 0)
      : mode_(mode), origin_(origin) {}

  bool normalized() const noexcept { return mode_ == StreamMode::Normalized; }
  Index origin() const noexcept { return origin_; }
  /// Number of reference places, or 0 while empty.
  Index width() const noexcept { return width_; }
  Index size() const noexcept { return static_cast<Index>(rows_.size()); }
  bool empty() const noexcept { return rows_.empty(); }
  /// Global index the next append will receive.
  Index next_index() const noexcept { return origin_ + size(); }
  bool contains(Index q) const noexcept { return q >= origin_ && q < next_index(); }

  /// Appends one query's scores (normalizing them first in Normalized mode).
  Index append(const ScoreVector& scores);

  const ScoreVector& row(Index q) const;
  bool degenerate(Index q) const;
  Scalar at(Index q, Index ref) const { return row(q)(ref); }

 private:
  StreamMode mode_;
  Index origin_;
  Index width_ = 0;
  std::deque<ScoreVector> rows_;
  std::vector<bool> degenerate_;
};

}  // namespace amusic
