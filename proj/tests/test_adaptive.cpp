#include <gtest/gtest.h>

#include "amusic/adaptive.hpp"
#include "amusic/error.hpp"
#include "amusic/synthetic.hpp"

using namespace amusic;

namespace {

VectorX<Scalar> vec(std::initializer_list<double> xs) {
  VectorX<Scalar> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

CorrectionRecord mag(double m) {
  CorrectionRecord r;
  r.correction_magnitude = m;
  r.corrected = m != 0;
  return r;
}

SyntheticProfile two_techniques(Index q, std::uint64_t seed, CompetenceSegment a_first,
                                CompetenceSegment b_first, Index swap_at = -1) {
  SyntheticProfile p;
  p.queries = p.references = q;
  p.seed = seed;
  auto segs = [&](CompetenceSegment s, CompetenceSegment other) {
    if (swap_at < 0) {
      s.begin = 0;
      s.end = q;
      return std::vector<CompetenceSegment>{s};
    }
    s.begin = 0;
    s.end = swap_at;
    other.begin = swap_at;
    other.end = q;
    return std::vector<CompetenceSegment>{s, other};
  };
  p.techniques = {{"A", segs(a_first, b_first)}, {"B", segs(b_first, a_first)}};
  return p;
}

CompetenceSegment comp(double p, double residual = 0.0) { return {0, 0, p, residual, 1.0}; }

std::vector<StepResult> run_all(AdaptiveController& c) {
  std::vector<StepResult> out;
  while (!c.done()) out.push_back(c.step());
  return out;
}

}  // namespace

TEST(SelectSubset, PrefixReachesThreshold) {
  EXPECT_EQ(select_subset(vec({0.5, 0.3, 0.15, 0.05}), 0.7), (std::vector<TechniqueSlot>{0, 1}));
  EXPECT_EQ(select_subset(vec({0.75, 0.25}), 0.7), (std::vector<TechniqueSlot>{0}));
  EXPECT_EQ(select_subset(vec({0.25, 0.25, 0.25, 0.25}), 0.7),
            (std::vector<TechniqueSlot>{0, 1, 2}));
  EXPECT_EQ(select_subset(vec({0.1, 0.2, 0.7}), 0.7), (std::vector<TechniqueSlot>{2}));
  EXPECT_EQ(select_subset(vec({0.1, 0.6, 0.3}), 0.7), (std::vector<TechniqueSlot>{1, 2}));
  // three tenths summed in floating point fall just short of 0.3
  EXPECT_EQ(select_subset(vec({0.1, 0.1, 0.1, 0.7}), 1.0).size(), 4u);
  EXPECT_EQ(select_subset(vec({0.0, 1.0}), 1.0), (std::vector<TechniqueSlot>{1}));
}

TEST(SelectSubset, Errors) {
  EXPECT_THROW(select_subset(VectorX<Scalar>(), 0.5), Error);
  EXPECT_THROW(select_subset(vec({1.0}), 0.0), Error);
  EXPECT_THROW(select_subset(vec({1.0}), 1.5), Error);
}

TEST(WindowVector, ConcatenatesInSubsetOrder) {
  std::vector<std::vector<CorrectionRecord>> recs = {{mag(0), mag(0.2), mag(0)}};
  std::vector<TechniqueSlot> a = {0};
  EXPECT_EQ(window_correction_vector(recs, a, 3), (std::vector<Scalar>{0, 0.2, 0}));

  recs = {{mag(0.1), mag(0)}, {mag(0), mag(0.3)}};
  std::vector<TechniqueSlot> ab = {0, 1}, ba = {1, 0};
  EXPECT_EQ(window_correction_vector(recs, ab, 2), (std::vector<Scalar>{0.1, 0, 0, 0.3}));
  EXPECT_EQ(window_correction_vector(recs, ba, 2), (std::vector<Scalar>{0, 0.3, 0.1, 0}));
  try {
    window_correction_vector(recs, ab, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowIncomplete);
  }
}

TEST(Controller, StableProviderHasZeroBaseline) {
  const auto ps = make_synthetic_providers(two_techniques(100, 1, comp(1), comp(1)));
  AdaptiveController c(ps, {});
  run_all(c);
  for (double m : c.baseline_correction()) EXPECT_EQ(m, 0.0);
  EXPECT_EQ(c.reselection_count(), 0);
}

TEST(Controller, BootstrapRunsEverythingThenSelects) {
  const auto ps = make_synthetic_providers(two_techniques(100, 2, comp(1), comp(0)));
  AdaptiveConfig cfg;
  AdaptiveController c(ps, cfg);
  for (Index q = 0; q < cfg.window; ++q) {
    EXPECT_EQ(c.phase(), Phase::Bootstrap);
    const auto r = c.step();
    EXPECT_EQ(r.subset.size(), 2u);
    EXPECT_EQ(r.initial_selection.has_value(), q == cfg.window - 1);
  }
  EXPECT_EQ(c.phase(), Phase::Monitoring);
  EXPECT_EQ(c.active_subset(), (std::vector<TechniqueSlot>{0}));
  EXPECT_EQ(static_cast<Index>(c.baseline_correction().size()), cfg.window);
  const auto r = c.step();
  EXPECT_EQ(r.subset, (std::vector<TechniqueSlot>{0}));
  EXPECT_EQ(c.technique_runs(cfg.window), 1);
  EXPECT_EQ(c.technique_runs(0), 2);
}

TEST(Controller, ConstantCompetenceNeverReselects) {
  const std::pair<double, double> schedules[] = {{1, 0}, {0, 1}, {1, 1}};
  for (auto [a, b] : schedules) {
    const auto ps = make_synthetic_providers(two_techniques(1000, 7, comp(a), comp(b)));
    AdaptiveController c(ps, {});
    std::vector<TechniqueSlot> first;
    for (const auto& r : run_all(c)) {
      if (r.initial_selection) first = r.initial_selection->subset;
      if (r.query_index >= 10) {
        EXPECT_EQ(r.subset, first);
      }
    }
    EXPECT_EQ(c.reselection_count(), 0) << a << "/" << b;
  }
}

TEST(Controller, SwapTriggersReselection) {
  const auto ps = make_synthetic_providers(two_techniques(1000, 7, comp(1), comp(0), 500));
  AdaptiveConfig cfg;
  AdaptiveController c(ps, cfg);
  const auto steps = run_all(c);
  Index first_trigger = -1;
  for (const auto& r : steps) {
    if (r.reselection && first_trigger < 0) {
      first_trigger = r.reselection->trigger_frame;
      EXPECT_EQ(r.reselection->old_subset, (std::vector<TechniqueSlot>{0}));
      EXPECT_EQ(r.reselection->new_subset, (std::vector<TechniqueSlot>{1}));
    }
  }
  ASSERT_GE(first_trigger, 500);
  EXPECT_LT(first_trigger, 500 + 2 * cfg.window);
  EXPECT_EQ(c.active_subset(), (std::vector<TechniqueSlot>{1}));
  Index hits = 0;
  for (const auto& r : steps) hits += std::abs(r.prediction - r.query_index) <= 1;
  EXPECT_GT(hits, 900);
}

TEST(Controller, TriggerSoundnessAndFreshBaseline) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto ps = make_synthetic_providers(two_techniques(600, seed, comp(0.8, 0.6), comp(0.5, 0.6)));
    AdaptiveConfig cfg;
    AdaptiveController c(ps, cfg);
    std::vector<Scalar> baseline;
    while (!c.done()) {
      const auto before = c.baseline_correction();
      const auto r = c.step();
      ASSERT_GE(c.active_subset().size(), 1u);
      ASSERT_LE(c.active_subset().size(), 2u);
      if (r.window_test) {
        const bool rejected = r.window_test->test.p_value < cfg.alpha;
        EXPECT_EQ(rejected, r.window_test->test.reject_h0);
        EXPECT_EQ(r.reselection.has_value(), r.window_test->test.reject_h0);
        EXPECT_NE(c.baseline_correction(), std::vector<Scalar>()) << r.query_index;
        EXPECT_EQ(static_cast<Index>(c.baseline_correction().size()),
                  static_cast<Index>(c.active_subset().size()) * cfg.window);
      } else if (!r.initial_selection) {
        EXPECT_EQ(c.baseline_correction(), before);
      }
    }
  }
}

TEST(Controller, SingleTechniqueEqualsSic) {
  SyntheticProfile p;
  p.queries = p.references = 400;
  p.seed = 5;
  p.techniques = {{"t", {{0, 200, 0.9, 0.6, 1.0}, {200, 400, 0.4, 0.6, 1.0}}}};
  const auto ps = make_synthetic_providers(p);
  AdaptiveController c(ps, {});
  const auto recs = run_sic_over_dataset(*ps[0], {});
  const auto steps = run_all(c);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    EXPECT_EQ(steps[i].prediction, recs[i].corrected_match);
    EXPECT_EQ(steps[i].chosen, 0u);
  }
  for (Index q = 0; q < 400; ++q) EXPECT_EQ(c.technique_runs(q), 1);
}

TEST(Controller, ParallelMatchesSequential) {
  const auto ps = make_synthetic_providers(two_techniques(600, 9, comp(0.9, 0.6), comp(0.2, 0.3), 300));
  AdaptiveConfig seq_cfg, par_cfg;
  par_cfg.parallel = true;
  AdaptiveController a(ps, seq_cfg), b(ps, par_cfg);
  while (!a.done()) {
    const auto x = a.step();
    const auto y = b.step();
    ASSERT_EQ(x.prediction, y.prediction);
    ASSERT_EQ(x.subset, y.subset);
    ASSERT_EQ(x.reselection.has_value(), y.reselection.has_value());
  }
  EXPECT_EQ(a.reselection_count(), b.reselection_count());
}

TEST(Controller, RunsStayWithinEnsembleBounds) {
  const auto ps = make_synthetic_providers(two_techniques(500, 4, comp(0.7, 0.6), comp(0.7, 0.6)));
  AdaptiveController c(ps, {});
  run_all(c);
  Index total = 0;
  for (Index q = 0; q < 500; ++q) {
    EXPECT_GE(c.technique_runs(q), 1);
    EXPECT_LE(c.technique_runs(q), 2);
    total += c.technique_runs(q);
  }
  const double ptr = static_cast<double>(total) / (500.0 * 2.0);
  EXPECT_GE(ptr, 0.5);
  EXPECT_LE(ptr, 1.0);
}

TEST(Controller, ShortRetentionUnderruns) {
  auto ps = make_synthetic_providers(two_techniques(1000, 7, comp(1), comp(0), 500), 3);
  AdaptiveController c(ps, {});
  try {
    run_all(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BufferUnderrun);
  }
}

TEST(Controller, ConfigValidation) {
  const auto ps = make_synthetic_providers(two_techniques(50, 1, comp(1), comp(1)));
  auto field_of = [&](AdaptiveConfig cfg) {
    try {
      AdaptiveController c(ps, cfg);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  AdaptiveConfig cfg;
  cfg.coverage_threshold = 1.5;
  EXPECT_EQ(field_of(cfg), "coverage_threshold");
  cfg = {};
  cfg.window = 1;
  EXPECT_EQ(field_of(cfg), "window");
  cfg = {};
  cfg.alpha = 0;
  EXPECT_EQ(field_of(cfg), "alpha");
}
