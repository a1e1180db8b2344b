#pragma once

#include <vector>

#include "amusic/types.hpp"

namespace amusic {

struct RefRange {
  Index first = 0;  // inclusive
  Index last = 0;   // inclusive
};

/// Which references count as a correct match for each query.
class GroundTruth {
 public:
  /// Query q matches reference q, give or take `tolerance` frames.
  static GroundTruth frame_aligned(Index tolerance);
  /// Query q matches any reference in `ranges[q]`.
  static GroundTruth explicit_ranges(std::vector<std::vector<RefRange>> ranges);

  bool aligned() const noexcept { return aligned_; }
  Index tolerance() const noexcept { return tolerance_; }
  const std::vector<std::vector<RefRange>>& ranges() const noexcept { return ranges_; }

  bool is_correct(Index prediction, Index q) const;

 private:
  bool aligned_ = true;
  Index tolerance_ = 0;
  std::vector<std::vector<RefRange>> ranges_;
};

struct PredictionEntry {
  Index query_index = 0;
  Index prediction = 0;
  Scalar confidence = 0;
  Index technique_runs = 1;
  bool reselection = false;
};

struct PredictionLog {
  Index ensemble_size = 1;
  std::vector<PredictionEntry> entries;  // in query order
};

struct PrPoint {
  Scalar precision = 0;
  Scalar recall = 0;
  Scalar threshold = 0;
};

struct EvalReport {
  Index queries = 0;
  Index ensemble_size = 1;
  Scalar accuracy = 0;
  std::vector<PrPoint> pr_points;
  Scalar auc = 0;
  Scalar ptr = 0;
  Index reselection_count = 0;
};

Scalar accuracy(const PredictionLog& log, const GroundTruth& gt);

/// Precision/recall at every distinct confidence, highest threshold first.
/// Recall is measured against all queries.
std::vector<PrPoint> pr_curve(const PredictionLog& log, const GroundTruth& gt);

/// Trapezoidal area under precision over recall. The curve is extended flat
/// from its first point back to recall 0; the result is clipped to [0, 1].
Scalar auc(const std::vector<PrPoint>& points);

/// Average fraction of the ensemble run per query.
Scalar ptr(const PredictionLog& log, Index ensemble_size);

EvalReport evaluate(const PredictionLog& log, const GroundTruth& gt);

}  // namespace amusic
