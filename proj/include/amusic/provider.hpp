#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "amusic/hog.hpp"
#include "amusic/types.hpp"
#include "amusic/vprd.hpp"

namespace amusic {

enum class ProviderKind { NativeHog, PrecomputedDescriptors, PrecomputedScores, Synthetic };

std::string_view to_string(ProviderKind kind);

/// A VPR technique: produces one raw score vector per query frame.
///
/// Implementations are read-only after construction, so `score` may be called
/// from several threads at once, and `score(q)` always returns the same vector.
/// `retention()` is how many frames behind the current one a query can still be
/// rescored (the frame buffer a live deployment would keep).
class TechniqueProvider {
 public:
  TechniqueProvider(std::string id, Index retention) : id_(std::move(id)), retention_(retention) {}
  virtual ~TechniqueProvider() = default;

  TechniqueProvider(const TechniqueProvider&) = delete;
  TechniqueProvider& operator=(const TechniqueProvider&) = delete;

  const std::string& id() const noexcept { return id_; }
  Index retention() const noexcept { return retention_; }
  void set_retention(Index frames) { retention_ = frames; }
  /// Informational per-query cost estimate.
  double cost_ms() const noexcept { return cost_ms_; }
  void set_cost_ms(double ms) { cost_ms_ = ms; }

  bool can_rescore(Index query, Index current) const noexcept {
    return query <= current && current - query <= retention_;
  }

  virtual ProviderKind kind() const = 0;
  virtual Index reference_count() const = 0;
  virtual Index query_count() const = 0;
  virtual ScoreVector score(Index query) const = 0;

 protected:
  void check_query(Index query) const;

 private:
  std::string id_;
  Index retention_;
  double cost_ms_ = 0;
};

using ProviderPtr = std::shared_ptr<const TechniqueProvider>;

/// Cosine similarity of `query` against every row of `refs`.
/// Throws ShapeMismatch on dimension mismatch and ZeroVector on any zero-norm operand.
ScoreVector cosine_score_vector(const Eigen::Ref<const VectorX<Scalar>>& query,
                                const RowMatrix& refs);

/// Rows of a query-by-reference score matrix, returned verbatim unless `normalize` is set.
class PrecomputedScoresProvider final : public TechniqueProvider {
 public:
  PrecomputedScoresProvider(std::string id, RowMatrix scores, bool normalize = false,
                            Index retention = 20);

  ProviderKind kind() const override { return ProviderKind::PrecomputedScores; }
  Index reference_count() const override { return scores_.cols(); }
  Index query_count() const override { return scores_.rows(); }
  ScoreVector score(Index query) const override;

 private:
  RowMatrix scores_;
  bool normalize_;
};

/// Cosine scores between precomputed query and reference descriptor matrices.
/// A zero-norm descriptor scores 0 against everything (a featureless frame).
class PrecomputedDescriptorsProvider final : public TechniqueProvider {
 public:
  PrecomputedDescriptorsProvider(std::string id, RowMatrix references, RowMatrix queries,
                                 Index retention = 20);

  ProviderKind kind() const override { return ProviderKind::PrecomputedDescriptors; }
  Index reference_count() const override { return references_.rows(); }
  Index query_count() const override { return queries_.rows(); }
  ScoreVector score(Index query) const override;

 private:
  RowMatrix references_;
  RowMatrix queries_;
};

/// HOG computed natively from PGM images. Reference descriptors are built up
/// front; query descriptors are computed on demand from the image files.
class HogProvider final : public TechniqueProvider {
 public:
  HogProvider(std::string id, const std::vector<std::filesystem::path>& reference_images,
              std::vector<std::filesystem::path> query_images, HogConfig cfg = {},
              Index retention = 20);

  ProviderKind kind() const override { return ProviderKind::NativeHog; }
  Index reference_count() const override { return references_.rows(); }
  Index query_count() const override { return static_cast<Index>(queries_.size()); }
  ScoreVector score(Index query) const override;

  const HogConfig& config() const noexcept { return cfg_; }

 private:
  HogConfig cfg_;
  RowMatrix references_;
  std::vector<std::filesystem::path> queries_;
};

}  // namespace amusic
