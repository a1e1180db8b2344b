#include <random>

#include <gtest/gtest.h>

#include "amusic/error.hpp"
#include "amusic/music.hpp"
#include "amusic/synthetic.hpp"
#include "helpers.hpp"

using namespace amusic;

namespace {

TechniqueRecord rec(TechniqueSlot slot, Index q, double consistency, Index match = 0,
                    bool normalized = true) {
  CorrectionRecord r;
  r.query_index = q;
  r.corrected_match = match;
  r.original_match = match;
  r.winning_consistency = consistency;
  r.normalized = normalized;
  return {slot, r};
}

SelectionHistory history_of(std::initializer_list<TechniqueSlot> winners) {
  SelectionHistory h(static_cast<Index>(winners.size()));
  for (auto w : winners) h.push(w);
  return h;
}

SyntheticProfile swap_profile(std::uint64_t seed) {
  SyntheticProfile p;
  p.queries = p.references = 1000;
  p.seed = seed;
  p.techniques = {{"A", {{0, 500, 1.0, 0.0, 1.0}, {500, 1000, 0.0, 0.0, 1.0}}},
                  {"B", {{0, 500, 0.0, 0.0, 1.0}, {500, 1000, 1.0, 0.0, 1.0}}}};
  return p;
}

double hit_rate(const std::vector<Index>& predictions, Index tolerance, Index from = 0,
                Index to = -1) {
  if (to < 0) to = static_cast<Index>(predictions.size());
  Index hits = 0;
  for (Index q = from; q < to; ++q) hits += std::abs(predictions[static_cast<std::size_t>(q)] - q) <= tolerance;
  return static_cast<double>(hits) / static_cast<double>(to - from);
}

}  // namespace

TEST(Arbitrate, HighestConsistencyWins) {
  std::vector<TechniqueRecord> r = {rec(0, 4, 0.9, 11), rec(1, 4, 0.4, 12)};
  const auto a = arbitrate_frame(r);
  EXPECT_EQ(a.winner, 0u);
  EXPECT_EQ(a.prediction, 11);
  EXPECT_DOUBLE_EQ(a.winner_consistency, 0.9);
}

TEST(Arbitrate, TieGoesToFirstRegistered) {
  std::vector<TechniqueRecord> r = {rec(1, 0, 0.5, 3), rec(0, 0, 0.5, 7)};
  const auto a = arbitrate_frame(r);
  EXPECT_EQ(a.winner, 0u);
  EXPECT_EQ(a.prediction, 7);
  ASSERT_NE(a.record_for(1), nullptr);
  EXPECT_EQ(a.record_for(1)->corrected_match, 3);
  EXPECT_EQ(a.record_for(2), nullptr);
}

TEST(Arbitrate, SingleTechnique) {
  std::vector<TechniqueRecord> r = {rec(2, 9, -0.3, 5)};
  const auto a = arbitrate_frame(r);
  EXPECT_EQ(a.winner, 2u);
  EXPECT_EQ(a.prediction, 5);
}

TEST(Arbitrate, Errors) {
  auto code_of = [](std::vector<TechniqueRecord> r) {
    try {
      arbitrate_frame(r);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigError;
  };
  EXPECT_EQ(code_of({}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of({rec(0, 1, 0.1), rec(1, 2, 0.1)}), ErrorCode::MixedQueryIndices);
  EXPECT_EQ(code_of({rec(0, 1, 0.1), rec(1, 1, 0.1, 0, false)}), ErrorCode::UnnormalizedStream);
}

TEST(Coverage, Counting) {
  auto c = coverage(history_of({0, 0, 1, 0}), 2);
  EXPECT_DOUBLE_EQ(c(0), 0.75);
  EXPECT_DOUBLE_EQ(c(1), 0.25);
  c = coverage(history_of({0, 0, 0, 0, 0, 0, 0, 0, 0, 0}), 1);
  EXPECT_DOUBLE_EQ(c(0), 1.0);
  c = coverage(history_of({0, 1, 2, 3, 0, 1, 0, 0, 1, 2}), 4);
  EXPECT_DOUBLE_EQ(c(0), 0.4);
  EXPECT_DOUBLE_EQ(c(1), 0.3);
  EXPECT_DOUBLE_EQ(c(2), 0.2);
  EXPECT_DOUBLE_EQ(c(3), 0.1);
}

TEST(Coverage, RingKeepsLastWindow) {
  SelectionHistory h(3);
  for (TechniqueSlot s : {1u, 1u, 1u, 0u, 0u}) h.push(s);
  EXPECT_EQ(h.size(), 3);
  const auto c = coverage(h, 2);
  EXPECT_NEAR(c(0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.sum(), 1.0, 1e-15);
}

TEST(Coverage, EmptyAndOutOfRange) {
  SelectionHistory h(4);
  try {
    coverage(h, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyWindow);
  }
  h.push(5);
  EXPECT_THROW(coverage(h, 2), Error);
}

TEST(Coverage, ExtraLosingTechniqueKeepsOrder) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int t = 0; t < 100; ++t) {
    SelectionHistory h(20);
    for (int i = 0; i < 20; ++i) h.push(static_cast<TechniqueSlot>(pick(rng)));
    const auto small = coverage(h, 3);
    const auto big = coverage(h, 5);
    EXPECT_NEAR(big.sum(), 1.0, 1e-12);
    EXPECT_EQ(big.head(3), small);
    EXPECT_EQ(big(3), 0.0);
  }
}

TEST(MusicOverDataset, DisjointCompetence) {
  const auto prof = swap_profile(11);
  const auto providers = make_synthetic_providers(prof);
  const SicConfig sic;
  const auto frames = run_music_over_dataset(providers, sic, 10);
  std::vector<Index> music;
  Index first_half_a = 0, second_half_b = 0;
  for (const auto& f : frames) {
    music.push_back(f.prediction);
    if (f.query_index < 500) first_half_a += f.winner == 0;
    else second_half_b += f.winner == 1;
    for (const auto& r : f.per_technique)
      ASSERT_GE(f.winner_consistency, r.record.winning_consistency);
  }
  EXPECT_GT(first_half_a, 490);
  EXPECT_GT(second_half_b, 400);
  double best_single = 0;
  for (const auto& p : providers) {
    std::vector<Index> sic_pred;
    for (const auto& r : run_sic_over_dataset(*p, sic)) sic_pred.push_back(r.corrected_match);
    best_single = std::max(best_single, hit_rate(sic_pred, 1));
  }
  EXPECT_GE(hit_rate(music, 1), best_single);
}

TEST(MusicOverDataset, SingleProviderEqualsSic) {
  SyntheticProfile p;
  p.queries = p.references = 300;
  p.seed = 4;
  p.techniques = {{"t", {{0, 300, 0.7, 0.5, 1.0}}}};
  const auto providers = make_synthetic_providers(p);
  SicConfig sic;
  sic.top_k = 7;
  sic.max_lookback = 9;
  const auto frames = run_music_over_dataset(providers, sic);
  const auto recs = run_sic_over_dataset(*providers[0], sic);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(frames[i].prediction, recs[i].corrected_match);
    EXPECT_EQ(frames[i].winner, 0u);
  }
}

TEST(MusicOverDataset, DuplicateProvidersFavourFirst) {
  SyntheticProfile p;
  p.queries = p.references = 200;
  p.seed = 5;
  p.techniques = {{"t", {{0, 200, 0.8, 0.5, 1.0}}}};
  const auto one = make_synthetic_providers(p);
  const std::vector<ProviderPtr> twice = {one[0], one[0]};
  const auto frames = run_music_over_dataset(twice, {});
  const auto recs = run_sic_over_dataset(*one[0], {});
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(frames[i].winner, 0u);
    EXPECT_EQ(frames[i].prediction, recs[i].corrected_match);
  }
}

TEST(MusicEngine, ParallelMatchesSequential) {
  const auto providers = make_synthetic_providers(swap_profile(2));
  MusicEngine seq(providers, {}, 10, false), par(providers, {}, 10, true);
  for (int q = 0; q < 200; ++q) {
    const auto a = seq.step();
    const auto b = par.step();
    ASSERT_EQ(a.winner, b.winner);
    ASSERT_EQ(a.prediction, b.prediction);
    ASSERT_EQ(a.winner_consistency, b.winner_consistency);
  }
  EXPECT_EQ(seq.history().window(), par.history().window());
}

TEST(MusicEngine, MismatchedProvidersRejected) {
  std::vector<ProviderPtr> ps = {
      std::make_shared<PrecomputedScoresProvider>("a", RowMatrix::Ones(5, 4)),
      std::make_shared<PrecomputedScoresProvider>("b", RowMatrix::Ones(5, 3))};
  try {
    MusicEngine e(ps, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}
