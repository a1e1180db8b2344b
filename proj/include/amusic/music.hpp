#pragma once

#include <deque>
#include <span>
#include <vector>

#include "amusic/sic.hpp"

namespace amusic {

struct TechniqueRecord {
  TechniqueSlot slot = 0;
  CorrectionRecord record;
};

/// Per-frame winner among the techniques that ran.
struct FrameArbitration {
  Index query_index = 0;
  TechniqueSlot winner = 0;
  Index prediction = 0;
  Scalar winner_consistency = 0;
  std::vector<TechniqueRecord> per_technique;  // ascending slot

  const CorrectionRecord* record_for(TechniqueSlot slot) const;
};

/// Picks the technique whose corrected candidate has the highest consistency.
/// Equal consistencies go to the lowest slot. Every record must come from a
/// z-scored stream (UnnormalizedStream) and share one query index (MixedQueryIndices).
FrameArbitration arbitrate_frame(std::span<const TechniqueRecord> records);

/// Winners of the last `capacity` frames, oldest first.
class SelectionHistory {
 public:
  explicit SelectionHistory(Index capacity);

  void push(TechniqueSlot winner);
  void clear() { window_.clear(); }

  Index capacity() const noexcept { return capacity_; }
  Index size() const noexcept { return static_cast<Index>(window_.size()); }
  bool empty() const noexcept { return window_.empty(); }
  const std::deque<TechniqueSlot>& window() const noexcept { return window_; }

 private:
  Index capacity_;
  std::deque<TechniqueSlot> window_;
};

/// Share of the window won by each of `ensemble_size` techniques.
VectorX<Scalar> coverage(const SelectionHistory& history, std::size_t ensemble_size);

/// Scores query `q` with each listed technique and feeds its SIC tracker.
/// With `parallel`, techniques run concurrently; results stay in `slots` order.
std::vector<TechniqueRecord> observe_techniques(std::span<const ProviderPtr> providers,
                                                std::span<SicTracker> trackers,
                                                std::span<const TechniqueSlot> slots, Index q,
                                                bool parallel);

/// Static ensemble: every technique runs on every frame.
class MusicEngine {
 public:
  MusicEngine(std::vector<ProviderPtr> providers, SicConfig sic, Index history_window = 10,
              bool parallel = false);

  FrameArbitration step();

  Index next_query() const noexcept { return next_; }
  const SelectionHistory& history() const noexcept { return history_; }
  std::size_t ensemble_size() const noexcept { return providers_.size(); }

 private:
  std::vector<ProviderPtr> providers_;
  std::vector<SicTracker> trackers_;
  std::vector<TechniqueSlot> slots_;
  SelectionHistory history_;
  bool parallel_;
  Index next_ = 0;
};

/// Validates that all providers agree on reference and query counts; returns the query count.
Index common_query_count(std::span<const ProviderPtr> providers);

std::vector<FrameArbitration> run_music_over_dataset(const std::vector<ProviderPtr>& providers,
                                                     const SicConfig& sic,
                                                     Index history_window = 10);

}  // namespace amusic
