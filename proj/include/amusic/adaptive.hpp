#pragma once

#include <optional>
#include <span>
#include <vector>

#include "amusic/music.hpp"
#include "amusic/stats.hpp"

namespace amusic {

struct AdaptiveConfig {
  Scalar coverage_threshold = 0.7;  // cumulative coverage the active subset must reach
  Index window = 10;                // frames per selection / test window
  Scalar alpha = 0.05;              // significance of the re-selection trigger
  SicConfig sic;
  bool parallel = false;

  void validate() const;
};

/// Shortest prefix of techniques, by descending coverage (ties: lower slot),
/// whose cumulative coverage reaches `threshold`. Never empty.
std::vector<TechniqueSlot> select_subset(const VectorX<Scalar>& coverage, Scalar threshold);

/// Correction magnitudes of `subset`, concatenated in subset order, each in frame order.
/// `records[slot]` holds that technique's records for the window.
std::vector<Scalar> window_correction_vector(
    std::span<const std::vector<CorrectionRecord>> records,
    std::span<const TechniqueSlot> subset, Index window);

enum class Phase { Bootstrap, Monitoring, Reselecting };

std::string_view to_string(Phase phase);

struct SelectionEvent {
  Index frame = 0;
  std::vector<TechniqueSlot> subset;
  VectorX<Scalar> coverage;
};

struct ReselectionEvent {
  Index trigger_frame = 0;
  Scalar p_value = 1;
  std::vector<TechniqueSlot> old_subset;
  std::vector<TechniqueSlot> new_subset;
  VectorX<Scalar> coverage_at_trigger;
};

struct WindowTest {
  Index frame = 0;
  PairedTestResult test;
};

struct StepResult {
  Index query_index = 0;
  Index prediction = 0;
  TechniqueSlot chosen = 0;
  Scalar consistency = 0;
  /// Techniques that ran for this frame when it was first processed.
  std::vector<TechniqueSlot> subset;
  FrameArbitration arbitration;
  std::optional<SelectionEvent> initial_selection;
  std::optional<WindowTest> window_test;
  std::optional<ReselectionEvent> reselection;
};

/// Adaptive ensemble controller, advanced one frame at a time.
///
/// The first `window` frames run every technique; the winners' coverage then
/// fixes the active subset and its correction magnitudes become the baseline.
/// Afterwards only the subset runs. At the end of each window its correction
/// vector is paired-t-tested against the baseline: no difference replaces the
/// baseline, a significant one rescores the same window with every technique
/// and selects a new subset from that window's winners.
///
/// A technique that was not running has no history before the frame it
/// (re)starts on, so its lookback is clamped to that start.
class AdaptiveController {
 public:
  AdaptiveController(std::vector<ProviderPtr> providers, AdaptiveConfig cfg);

  StepResult step();
  bool done() const noexcept { return next_ >= queries_; }

  Index next_query() const noexcept { return next_; }
  Index query_count() const noexcept { return queries_; }
  std::size_t ensemble_size() const noexcept { return providers_.size(); }
  const std::vector<ProviderPtr>& providers() const noexcept { return providers_; }
  const AdaptiveConfig& config() const noexcept { return cfg_; }

  Phase phase() const noexcept { return phase_; }
  const std::vector<TechniqueSlot>& active_subset() const noexcept { return active_; }
  const std::vector<Scalar>& baseline_correction() const noexcept { return baseline_; }
  Index frames_since_window_start() const noexcept { return next_ - window_start_; }
  const SelectionHistory& history() const noexcept { return history_; }

  /// Techniques run for query q so far; final once q < finalized_until().
  Index technique_runs(Index q) const;
  Index finalized_until() const noexcept { return window_start_; }
  Index reselection_count() const noexcept { return reselections_; }

 private:
  void close_window(StepResult& result);
  std::vector<TechniqueSlot> reselect(Index last_frame, VectorX<Scalar>& cov);
  void deactivate_others();

  std::vector<ProviderPtr> providers_;
  AdaptiveConfig cfg_;
  Index queries_;
  std::vector<SicTracker> trackers_;
  std::vector<TechniqueSlot> all_;
  std::vector<TechniqueSlot> active_;
  std::vector<Scalar> baseline_;
  std::vector<std::vector<CorrectionRecord>> window_records_;  // per slot
  SelectionHistory history_;
  std::vector<Index> runs_;
  Phase phase_ = Phase::Bootstrap;
  Index next_ = 0;
  Index window_start_ = 0;
  Index reselections_ = 0;
};

}  // namespace amusic
