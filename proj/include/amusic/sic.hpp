#pragma once

#include <vector>

#include "amusic/provider.hpp"
#include "amusic/score.hpp"

namespace amusic {

struct SicConfig {
  Index top_k = 50;           // candidates taken from the current score vector
  Index max_lookback = 1000;  // past queries walked along each candidate's diagonal
  /// Whether the candidate's own score (shift 0) is part of its average.
  bool include_current = true;

  void validate() const;
};

/// Outcome of self-correcting one query of one technique.
struct CorrectionRecord {
  Index query_index = 0;
  Index original_match = 0;   // argmax of the query's scores
  Index corrected_match = 0;  // candidate with the highest sequential consistency
  /// consistency(corrected) - consistency(original); exactly 0 when not corrected.
  Scalar correction_magnitude = 0;
  Scalar winning_consistency = 0;
  /// Stream value of the original match (the uncorrected confidence).
  Scalar original_score = 0;
  bool corrected = false;
  /// Whether the source stream held z-scored rows.
  bool normalized = false;
};

/// Shifts available to candidate `c` at query `q`: min(F, q - origin, c).
Index effective_lookback(const ScoreStream& stream, Index q, Index c, const SicConfig& cfg);

/// Mean score along the back-shifted diagonal S[q-d][c-d], d = 0..F'.
Scalar consistency_score(const ScoreStream& stream, Index q, Index c, const SicConfig& cfg);

/// Indices of the top min(k, n) scores, best first; equal scores keep lower index first.
std::vector<Index> top_candidates(const ScoreVector& scores, Index k);

CorrectionRecord correct_query(const ScoreStream& stream, Index q, const SicConfig& cfg);

/// Streaming SIC for one technique: append a query, get its correction.
class SicTracker {
 public:
  explicit SicTracker(SicConfig cfg = {}, StreamMode mode = StreamMode::Normalized,
                      Index origin = 0);

  /// Appends `raw` as the next query and corrects it.
  CorrectionRecord observe(const ScoreVector& raw);

  /// Drops all history; the next observed query gets index `origin`.
  void restart(Index origin);

  const ScoreStream& stream() const noexcept { return stream_; }
  const SicConfig& config() const noexcept { return cfg_; }

 private:
  SicConfig cfg_;
  StreamMode mode_;
  ScoreStream stream_;
};

/// Runs SIC over every query of `provider` in order, on z-scored streams.
std::vector<CorrectionRecord> run_sic_over_dataset(const TechniqueProvider& provider,
                                                   const SicConfig& cfg);

}  // namespace amusic
