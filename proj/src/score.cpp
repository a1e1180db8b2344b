#include "amusic/score.hpp"

#include <string>

namespace amusic {

Index ScoreStream::append(const ScoreVector& scores) {
  if (!empty() && scores.size() != width_) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(width_) +
                                              " scores, got " + std::to_string(scores.size()));
  }
  if (scores.size() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "empty score vector");
  }
  if (!scores.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "score vector for query " +
                                               std::to_string(next_index()) + " is not finite");
  }
  if (mode_ == StreamMode::Normalized) {
    auto n = normalize_scores(scores);
    rows_.push_back(std::move(n.values));
    degenerate_.push_back(n.degenerate);
  } else {
    rows_.push_back(scores);
    degenerate_.push_back(false);
  }
  width_ = scores.size();
  return next_index() - 1;
}

const ScoreVector& ScoreStream::row(Index q) const {
  if (!contains(q)) {
    throw Error(ErrorCode::IndexOutOfRange,
                "query " + std::to_string(q) + " not in stream [" + std::to_string(origin_) +
                    ", " + std::to_string(next_index()) + ")");
  }
  return rows_[static_cast<std::size_t>(q - origin_)];
}

bool ScoreStream::degenerate(Index q) const {
  row(q);
  return degenerate_[static_cast<std::size_t>(q - origin_)];
}

}  // namespace amusic
