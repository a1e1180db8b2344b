#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "amusic/score.hpp"
#include "helpers.hpp"

using namespace amusic;

namespace {

std::vector<Index> descending_order(const ScoreVector& v) {
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return v(a) > v(b); });
  return idx;
}

}  // namespace

TEST(Normalize, OneTwoThree) {
  ScoreVector v(3);
  v << 1, 2, 3;
  const auto n = normalize_scores(v);
  // mean 2, population variance (1 + 0 + 1) / 3
  const double sd = std::sqrt(2.0 / 3.0);
  EXPECT_FALSE(n.degenerate);
  EXPECT_NEAR(n.values(0), -1.0 / sd, 1e-12);
  EXPECT_NEAR(n.values(1), 0.0, 1e-12);
  EXPECT_NEAR(n.values(2), 1.0 / sd, 1e-12);
  EXPECT_NEAR(n.values(2), 1.2247, 1e-4);
  EXPECT_DOUBLE_EQ(n.params.mean, 2.0);
  EXPECT_NEAR(n.params.std_dev, sd, 1e-15);
}

TEST(Normalize, FlatVectorIsDegenerate) {
  ScoreVector v = ScoreVector::Constant(3, 5.0);
  const auto n = normalize_scores(v);
  EXPECT_TRUE(n.degenerate);
  EXPECT_TRUE((n.values.array() == 0.0).all());
}

TEST(Normalize, RejectsBadInput) {
  ScoreVector one(1);
  one << 4;
  EXPECT_THROW(normalize_scores(one), Error);
  ScoreVector bad(3);
  bad << 1, std::numeric_limits<double>::quiet_NaN(), 2;
  try {
    normalize_scores(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
  }
}

TEST(Normalize, MomentsAndArgmaxOnRandomVectors) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Index> len(2, 200);
  for (int i = 0; i < 1000; ++i) {
    const ScoreVector v = test::random_vector(rng, len(rng), -5, 5);
    const auto n = normalize_scores(v);
    const double mean = n.values.mean();
    const double var = (n.values.array() - mean).square().mean();
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(var), 1.0, 1e-9);
    EXPECT_EQ(argmax(n.values), argmax(v));
  }
}

TEST(Normalize, IdempotentAndRankPreserving) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const ScoreVector v = test::random_vector(rng, 50, 0, 1);
    const auto once = normalize_scores(v);
    const auto twice = normalize_scores(once.values);
    EXPECT_LE((once.values - twice.values).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ(descending_order(v), descending_order(once.values));
  }
}

TEST(Normalize, WorksOnFloatExpressions) {
  Eigen::VectorXf f(4);
  f << 1, 2, 3, 4;
  const auto n = normalize_scores(f * 2.0f);
  EXPECT_NEAR(n.values.sum(), 0.0, 1e-12);
}

TEST(Argmax, LowestIndexAmongTies) {
  ScoreVector v(4);
  v << 0.3, 0.9, 0.1, 0.9;
  EXPECT_EQ(argmax(v), 1);
}

TEST(ScoreStream, AppendAssignsSequentialIndices) {
  ScoreStream s(StreamMode::Raw);
  ScoreVector a(3), b(3);
  a << 1, 2, 3;
  b << 4, 5, 6;
  EXPECT_EQ(s.append(a), 0);
  const ScoreVector before = s.row(0);
  EXPECT_EQ(s.append(b), 1);
  EXPECT_EQ(s.row(0), before);
  EXPECT_EQ(s.width(), 3);
  EXPECT_EQ(s.next_index(), 2);
}

TEST(ScoreStream, OriginShiftsIndices) {
  ScoreStream s(StreamMode::Normalized, 40);
  ScoreVector a(2);
  a << 0, 1;
  EXPECT_EQ(s.append(a), 40);
  EXPECT_TRUE(s.contains(40));
  EXPECT_FALSE(s.contains(39));
  EXPECT_THROW(s.row(39), Error);
}

TEST(ScoreStream, ShapeMismatchAndNonFinite) {
  ScoreStream s(StreamMode::Raw);
  s.append(ScoreVector::Zero(4));
  try {
    s.append(ScoreVector::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  ScoreVector inf = ScoreVector::Zero(4);
  inf(2) = std::numeric_limits<double>::infinity();
  try {
    s.append(inf);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
  }
  EXPECT_EQ(s.size(), 1);
}

TEST(ScoreStream, NormalizedModeStoresZScores) {
  ScoreStream s(StreamMode::Normalized);
  ScoreVector a(3);
  a << 1, 2, 3;
  s.append(a);
  s.append(ScoreVector::Constant(3, 7.0));
  EXPECT_NEAR(s.at(0, 0), -std::sqrt(1.5), 1e-12);
  EXPECT_FALSE(s.degenerate(0));
  EXPECT_TRUE(s.degenerate(1));
  EXPECT_EQ(s.row(1), ScoreVector::Zero(3));
}

TEST(ScoreStream, RowsNeverChangeAsStreamGrows) {
  std::mt19937_64 rng(3);
  ScoreStream s;
  std::vector<ScoreVector> seen;
  for (int i = 0; i < 200; ++i) {
    s.append(test::random_vector(rng, 8));
    seen.push_back(s.row(i));
    for (int j = 0; j <= i; j += 17) ASSERT_EQ(s.row(j), seen[static_cast<std::size_t>(j)]);
  }
}
