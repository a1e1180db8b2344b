#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amusic/provider.hpp"

namespace amusic {

/// Behaviour of one technique over the query range [begin, end).
///
/// Each frame draws uniform background noise in [0, noise). With probability
/// `competence` the true reference gets a peak of height noise + peak_gain;
/// otherwise a decoy at least `decoy_min_distance` places away gets that peak
/// and the true reference scores exactly `residual` times the peak height,
/// so 0 drops it below all noise (the place is lost).
struct CompetenceSegment {
  Index begin = 0;
  Index end = 0;
  Scalar competence = 1.0;
  Scalar residual = 0.0;
  Scalar noise = 1.0;
};

struct SyntheticTechnique {
  std::string id;
  std::vector<CompetenceSegment> segments;
};

/// Frame-aligned scenario: query q's true reference is q.
struct SyntheticProfile {
  Index queries = 0;
  Index references = 0;
  std::uint64_t seed = 0;
  Scalar peak_gain = 2.0;
  Index decoy_min_distance = 5;
  Index tolerance = 1;
  std::vector<SyntheticTechnique> techniques;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

class SyntheticProvider final : public TechniqueProvider {
 public:
  SyntheticProvider(const SyntheticProfile& profile, std::size_t technique, Index retention = 20);

  ProviderKind kind() const override { return ProviderKind::Synthetic; }
  Index reference_count() const override { return references_; }
  Index query_count() const override { return queries_; }
  ScoreVector score(Index query) const override;

  /// Whether the true reference peaks on this query (the draw `score` uses).
  bool competent_on(Index query) const;

 private:
  const CompetenceSegment& segment_for(Index query) const;

  Index queries_;
  Index references_;
  std::uint64_t stream_seed_;
  Scalar peak_gain_;
  Index decoy_min_distance_;
  std::vector<CompetenceSegment> segments_;
};

std::vector<ProviderPtr> make_synthetic_providers(const SyntheticProfile& profile,
                                                  Index retention = 20);

/// Full query-by-reference score matrix of one synthetic technique.
RowMatrix synthetic_score_matrix(const SyntheticProvider& provider);

}  // namespace amusic
