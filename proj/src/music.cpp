#include "amusic/music.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "amusic/error.hpp"

namespace amusic {

const CorrectionRecord* FrameArbitration::record_for(TechniqueSlot slot) const {
  for (const auto& r : per_technique) {
    if (r.slot == slot) return &r.record;
  }
  return nullptr;
}

FrameArbitration arbitrate_frame(std::span<const TechniqueRecord> records) {
  if (records.empty()) throw Error(ErrorCode::InvalidArgument, "no technique records to arbitrate");
  const Index q = records.front().record.query_index;
  for (const auto& r : records) {
    if (r.record.query_index != q) {
      throw Error(ErrorCode::MixedQueryIndices, "records for queries " + std::to_string(q) +
                                                    " and " +
                                                    std::to_string(r.record.query_index));
    }
    if (!r.record.normalized) {
      throw Error(ErrorCode::UnnormalizedStream,
                  "technique slot " + std::to_string(r.slot) + " was not z-scored");
    }
  }
  FrameArbitration out;
  out.query_index = q;
  out.per_technique.assign(records.begin(), records.end());
  std::sort(out.per_technique.begin(), out.per_technique.end(),
            [](const auto& a, const auto& b) { return a.slot < b.slot; });
  const TechniqueRecord* best = &out.per_technique.front();
  for (const auto& r : out.per_technique) {
    if (r.record.winning_consistency > best->record.winning_consistency) best = &r;
  }
  out.winner = best->slot;
  out.prediction = best->record.corrected_match;
  out.winner_consistency = best->record.winning_consistency;
  return out;
}

SelectionHistory::SelectionHistory(Index capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("window", "selection history needs capacity >= 1");
}

void SelectionHistory::push(TechniqueSlot winner) {
  window_.push_back(winner);
  while (size() > capacity_) window_.pop_front();
}

VectorX<Scalar> coverage(const SelectionHistory& history, std::size_t ensemble_size) {
  if (history.empty()) throw Error(ErrorCode::EmptyWindow, "selection history is empty");
  VectorX<Scalar> counts = VectorX<Scalar>::Zero(static_cast<Index>(ensemble_size));
  for (TechniqueSlot s : history.window()) {
    if (s >= ensemble_size) {
      throw Error(ErrorCode::IndexOutOfRange, "slot " + std::to_string(s) + " outside ensemble");
    }
    counts(static_cast<Index>(s)) += 1;
  }
  return counts / static_cast<Scalar>(history.size());
}

std::vector<TechniqueRecord> observe_techniques(std::span<const ProviderPtr> providers,
                                                std::span<SicTracker> trackers,
                                                std::span<const TechniqueSlot> slots, Index q,
                                                bool parallel) {
  std::vector<TechniqueRecord> out(slots.size());
  auto run_one = [&](std::size_t i) {
    const TechniqueSlot s = slots[i];
    SicTracker& tracker = trackers[s];
    if (tracker.stream().next_index() != q) {
      throw Error(ErrorCode::IndexOutOfRange,
                  providers[s]->id() + ": expected query " +
                      std::to_string(tracker.stream().next_index()) + ", got " + std::to_string(q));
    }
    out[i] = TechniqueRecord{s, tracker.observe(providers[s]->score(q))};
  };
  if (!parallel || slots.size() < 2) {
    for (std::size_t i = 0; i < slots.size(); ++i) run_one(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, run_one, i));
  }
  for (auto& j : jobs) j.get();
  return out;
}

Index common_query_count(std::span<const ProviderPtr> providers) {
  if (providers.empty()) throw ConfigError("techniques", "at least one technique required");
  const Index refs = providers.front()->reference_count();
  const Index queries = providers.front()->query_count();
  for (const auto& p : providers) {
    if (p->reference_count() != refs) {
      throw Error(ErrorCode::ShapeMismatch, p->id() + ": " + std::to_string(p->reference_count()) +
                                                " references, expected " + std::to_string(refs));
    }
    if (p->query_count() != queries) {
      throw Error(ErrorCode::ShapeMismatch, p->id() + ": " + std::to_string(p->query_count()) +
                                                " queries, expected " + std::to_string(queries));
    }
  }
  return queries;
}

MusicEngine::MusicEngine(std::vector<ProviderPtr> providers, SicConfig sic, Index history_window,
                         bool parallel)
    : providers_(std::move(providers)), history_(history_window), parallel_(parallel) {
  common_query_count(providers_);
  trackers_.assign(providers_.size(), SicTracker(sic));
  for (std::size_t i = 0; i < providers_.size(); ++i) slots_.push_back(i);
}

FrameArbitration MusicEngine::step() {
  const auto records = observe_techniques(providers_, trackers_, slots_, next_, parallel_);
  FrameArbitration frame = arbitrate_frame(records);
  history_.push(frame.winner);
  ++next_;
  return frame;
}

std::vector<FrameArbitration> run_music_over_dataset(const std::vector<ProviderPtr>& providers,
                                                     const SicConfig& sic, Index history_window) {
  MusicEngine engine(providers, sic, history_window);
  const Index queries = common_query_count(providers);
  std::vector<FrameArbitration> out;
  out.reserve(static_cast<std::size_t>(queries));
  for (Index q = 0; q < queries; ++q) out.push_back(engine.step());
  return out;
}

}  // namespace amusic
