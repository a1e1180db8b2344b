#include "amusic/sic.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "amusic/error.hpp"

namespace amusic {

void SicConfig::validate() const {
  if (top_k < 1) throw ConfigError("top_k", "must be >= 1");
  if (max_lookback < 0) throw ConfigError("max_lookback", "must be >= 0");
}

Index effective_lookback(const ScoreStream& stream, Index q, Index c, const SicConfig& cfg) {
  if (!stream.contains(q)) {
    throw Error(ErrorCode::IndexOutOfRange, "query " + std::to_string(q) + " not in stream");
  }
  if (c < 0 || c >= stream.width()) {
    throw Error(ErrorCode::IndexOutOfRange, "candidate " + std::to_string(c) + " outside [0, " +
                                                std::to_string(stream.width()) + ")");
  }
  return std::min({cfg.max_lookback, q - stream.origin(), c});
}

Scalar consistency_score(const ScoreStream& stream, Index q, Index c, const SicConfig& cfg) {
  const Index lookback = effective_lookback(stream, q, c, cfg);
  const Index first = (cfg.include_current || lookback == 0) ? 0 : 1;
  Scalar sum = 0;
  for (Index d = first; d <= lookback; ++d) sum += stream.at(q - d, c - d);
  return sum / static_cast<Scalar>(lookback - first + 1);
}

std::vector<Index> top_candidates(const ScoreVector& scores, Index k) {
  const Index n = scores.size();
  k = std::min(k, n);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](Index a, Index b) {
    return scores(a) > scores(b) || (scores(a) == scores(b) && a < b);
  });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

CorrectionRecord correct_query(const ScoreStream& stream, Index q, const SicConfig& cfg) {
  cfg.validate();
  const ScoreVector& row = stream.row(q);
  const std::vector<Index> candidates = top_candidates(row, cfg.top_k);

  CorrectionRecord rec;
  rec.query_index = q;
  rec.normalized = stream.normalized();
  rec.original_match = candidates.front();
  rec.original_score = row(rec.original_match);

  Scalar original_consistency = 0;
  Index best = candidates.front();
  Scalar best_consistency = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Index c = candidates[i];
    const Scalar sc = consistency_score(stream, q, c, cfg);
    if (i == 0) {
      original_consistency = sc;
      best_consistency = sc;
      continue;
    }
    // candidates arrive by descending score, so on equal consistency the earlier one wins
    if (sc > best_consistency) {
      best = c;
      best_consistency = sc;
    }
  }
  rec.corrected_match = best;
  rec.winning_consistency = best_consistency;
  rec.corrected = best != rec.original_match;
  rec.correction_magnitude = rec.corrected ? best_consistency - original_consistency : 0.0;
  return rec;
}

SicTracker::SicTracker(SicConfig cfg, StreamMode mode, Index origin)
    : cfg_(cfg), mode_(mode), stream_(mode, origin) {
  cfg_.validate();
}

CorrectionRecord SicTracker::observe(const ScoreVector& raw) {
  const Index q = stream_.append(raw);
  return correct_query(stream_, q, cfg_);
}

void SicTracker::restart(Index origin) { stream_ = ScoreStream(mode_, origin); }

std::vector<CorrectionRecord> run_sic_over_dataset(const TechniqueProvider& provider,
                                                   const SicConfig& cfg) {
  SicTracker tracker(cfg);
  std::vector<CorrectionRecord> out;
  out.reserve(static_cast<std::size_t>(provider.query_count()));
  for (Index q = 0; q < provider.query_count(); ++q) out.push_back(tracker.observe(provider.score(q)));
  return out;
}

}  // namespace amusic
