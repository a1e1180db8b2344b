#include "amusic/adaptive.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "amusic/error.hpp"

namespace amusic {

void AdaptiveConfig::validate() const {
  if (!(coverage_threshold > 0 && coverage_threshold <= 1)) {
    throw ConfigError("coverage_threshold", "must be in (0, 1]");
  }
  if (window < 2) throw ConfigError("window", "must be >= 2 for the paired t-test");
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha", "must be in (0, 1)");
  sic.validate();
}

std::vector<TechniqueSlot> select_subset(const VectorX<Scalar>& coverage, Scalar threshold) {
  if (coverage.size() == 0) throw Error(ErrorCode::EmptyCoverage, "coverage vector is empty");
  if (!(threshold > 0 && threshold <= 1)) {
    throw Error(ErrorCode::InvalidArgument, "coverage threshold must be in (0, 1]");
  }
  std::vector<TechniqueSlot> order(static_cast<std::size_t>(coverage.size()));
  std::iota(order.begin(), order.end(), TechniqueSlot{0});
  std::stable_sort(order.begin(), order.end(), [&](TechniqueSlot a, TechniqueSlot b) {
    return coverage(static_cast<Index>(a)) > coverage(static_cast<Index>(b));
  });
  // coverages are count ratios; absorb the rounding of their partial sums
  constexpr Scalar kSlack = 1e-12;
  std::vector<TechniqueSlot> subset;
  Scalar cumulative = 0;
  for (TechniqueSlot s : order) {
    subset.push_back(s);
    cumulative += coverage(static_cast<Index>(s));
    if (cumulative >= threshold - kSlack) break;
  }
  return subset;
}

std::vector<Scalar> window_correction_vector(
    std::span<const std::vector<CorrectionRecord>> records,
    std::span<const TechniqueSlot> subset, Index window) {
  std::vector<Scalar> out;
  out.reserve(subset.size() * static_cast<std::size_t>(window));
  for (TechniqueSlot s : subset) {
    if (s >= records.size() || static_cast<Index>(records[s].size()) != window) {
      throw Error(ErrorCode::WindowIncomplete,
                  "technique slot " + std::to_string(s) + " lacks " + std::to_string(window) +
                      " records for the window");
    }
    for (const auto& r : records[s]) out.push_back(r.correction_magnitude);
  }
  return out;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Bootstrap: return "bootstrap";
    case Phase::Monitoring: return "monitoring";
    case Phase::Reselecting: return "reselecting";
  }
  return "unknown";
}

AdaptiveController::AdaptiveController(std::vector<ProviderPtr> providers, AdaptiveConfig cfg)
    : providers_(std::move(providers)),
      cfg_(cfg),
      queries_(common_query_count(providers_)),
      history_(cfg.window) {
  cfg_.validate();
  trackers_.assign(providers_.size(), SicTracker(cfg_.sic));
  all_.resize(providers_.size());
  std::iota(all_.begin(), all_.end(), TechniqueSlot{0});
  active_ = all_;
  window_records_.resize(providers_.size());
  runs_.reserve(static_cast<std::size_t>(queries_));
}

Index AdaptiveController::technique_runs(Index q) const {
  if (q < 0 || q >= static_cast<Index>(runs_.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "query " + std::to_string(q) + " not processed yet");
  }
  return runs_[static_cast<std::size_t>(q)];
}

StepResult AdaptiveController::step() {
  if (done()) throw Error(ErrorCode::IndexOutOfRange, "all queries processed");
  const Index q = next_;
  const auto records = observe_techniques(providers_, trackers_, active_, q, cfg_.parallel);

  StepResult result;
  result.query_index = q;
  result.subset = active_;
  result.arbitration = arbitrate_frame(records);
  result.prediction = result.arbitration.prediction;
  result.chosen = result.arbitration.winner;
  result.consistency = result.arbitration.winner_consistency;

  for (const auto& r : records) window_records_[r.slot].push_back(r.record);
  history_.push(result.chosen);
  runs_.push_back(static_cast<Index>(active_.size()));
  ++next_;

  if (next_ - window_start_ == cfg_.window) close_window(result);
  return result;
}

void AdaptiveController::close_window(StepResult& result) {
  const Index last = next_ - 1;
  if (phase_ == Phase::Bootstrap) {
    SelectionEvent ev;
    ev.frame = last;
    ev.coverage = coverage(history_, providers_.size());
    ev.subset = select_subset(ev.coverage, cfg_.coverage_threshold);
    active_ = ev.subset;
    baseline_ = window_correction_vector(window_records_, active_, cfg_.window);
    deactivate_others();
    phase_ = Phase::Monitoring;
    result.initial_selection = std::move(ev);
  } else {
    const auto current = window_correction_vector(window_records_, active_, cfg_.window);
    WindowTest wt{last, paired_t_test(baseline_, current, cfg_.alpha)};
    if (!wt.test.reject_h0) {
      baseline_ = current;
    } else {
      ReselectionEvent ev;
      ev.trigger_frame = last;
      ev.p_value = wt.test.p_value;
      ev.old_subset = active_;
      phase_ = Phase::Reselecting;
      ev.new_subset = reselect(last, ev.coverage_at_trigger);
      active_ = ev.new_subset;
      baseline_ = window_correction_vector(window_records_, active_, cfg_.window);
      deactivate_others();
      phase_ = Phase::Monitoring;
      ++reselections_;
      result.reselection = std::move(ev);
    }
    result.window_test = wt;
  }
  for (auto& r : window_records_) r.clear();
  window_start_ = next_;
}

std::vector<TechniqueSlot> AdaptiveController::reselect(Index last_frame, VectorX<Scalar>& cov) {
  const Index first = window_start_;
  for (TechniqueSlot s : all_) {
    if (std::find(active_.begin(), active_.end(), s) != active_.end()) continue;
    if (!providers_[s]->can_rescore(first, last_frame)) {
      throw Error(ErrorCode::BufferUnderrun,
                  providers_[s]->id() + " cannot rescore frames " + std::to_string(first) + ".." +
                      std::to_string(last_frame) + " (retains " +
                      std::to_string(providers_[s]->retention()) + ")");
    }
    trackers_[s].restart(first);
    for (Index f = first; f <= last_frame; ++f) {
      window_records_[s].push_back(trackers_[s].observe(providers_[s]->score(f)));
    }
  }
  history_.clear();
  std::vector<TechniqueRecord> frame_records(all_.size());
  for (Index i = 0; i < cfg_.window; ++i) {
    for (TechniqueSlot s : all_) {
      frame_records[s] = TechniqueRecord{s, window_records_[s][static_cast<std::size_t>(i)]};
    }
    history_.push(arbitrate_frame(frame_records).winner);
    runs_[static_cast<std::size_t>(first + i)] = static_cast<Index>(all_.size());
  }
  cov = coverage(history_, providers_.size());
  return select_subset(cov, cfg_.coverage_threshold);
}

void AdaptiveController::deactivate_others() {
  for (TechniqueSlot s : all_) {
    if (std::find(active_.begin(), active_.end(), s) == active_.end()) trackers_[s].restart(0);
  }
}

}  // namespace amusic
