#include "amusic/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "amusic/error.hpp"

namespace amusic {

GroundTruth GroundTruth::frame_aligned(Index tolerance) {
  if (tolerance < 0) throw ConfigError("ground_truth.tolerance", "must be >= 0");
  GroundTruth gt;
  gt.aligned_ = true;
  gt.tolerance_ = tolerance;
  return gt;
}

GroundTruth GroundTruth::explicit_ranges(std::vector<std::vector<RefRange>> ranges) {
  for (std::size_t q = 0; q < ranges.size(); ++q) {
    if (ranges[q].empty()) {
      throw ConfigError("ground_truth.ranges", "query " + std::to_string(q) + " has no ranges");
    }
    for (const auto& r : ranges[q]) {
      if (r.first < 0 || r.last < r.first) {
        throw ConfigError("ground_truth.ranges", "bad range for query " + std::to_string(q));
      }
    }
  }
  GroundTruth gt;
  gt.aligned_ = false;
  gt.ranges_ = std::move(ranges);
  return gt;
}

bool GroundTruth::is_correct(Index prediction, Index q) const {
  if (prediction < 0 || q < 0) throw Error(ErrorCode::IndexOutOfRange, "negative index");
  if (aligned_) return std::abs(prediction - q) <= tolerance_;
  if (q >= static_cast<Index>(ranges_.size())) {
    throw Error(ErrorCode::MissingGroundTruth, "no ground truth for query " + std::to_string(q));
  }
  for (const auto& r : ranges_[static_cast<std::size_t>(q)]) {
    if (prediction >= r.first && prediction <= r.last) return true;
  }
  return false;
}

Scalar accuracy(const PredictionLog& log, const GroundTruth& gt) {
  if (log.entries.empty()) throw Error(ErrorCode::InvalidArgument, "empty prediction log");
  Index correct = 0;
  for (const auto& e : log.entries) correct += gt.is_correct(e.prediction, e.query_index) ? 1 : 0;
  return static_cast<Scalar>(correct) / static_cast<Scalar>(log.entries.size());
}

std::vector<PrPoint> pr_curve(const PredictionLog& log, const GroundTruth& gt) {
  struct Item {
    Scalar confidence;
    bool correct;
  };
  std::vector<Item> items;
  items.reserve(log.entries.size());
  for (const auto& e : log.entries) {
    if (!std::isfinite(e.confidence)) {
      throw Error(ErrorCode::NonFiniteValue, "confidence of query " + std::to_string(e.query_index));
    }
    items.push_back({e.confidence, gt.is_correct(e.prediction, e.query_index)});
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.confidence > b.confidence; });

  const Scalar total = static_cast<Scalar>(items.size());
  std::vector<PrPoint> points;
  Index retained = 0;
  Index hits = 0;
  for (std::size_t i = 0; i < items.size();) {
    const Scalar theta = items[i].confidence;
    for (; i < items.size() && items[i].confidence == theta; ++i) {
      ++retained;
      hits += items[i].correct ? 1 : 0;
    }
    points.push_back({static_cast<Scalar>(hits) / static_cast<Scalar>(retained),
                      static_cast<Scalar>(hits) / total, theta});
  }
  return points;
}

Scalar auc(const std::vector<PrPoint>& points) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "PR curve has no points");
  Scalar area = points.front().recall * points.front().precision;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].recall - points[i - 1].recall) *
            (points[i].precision + points[i - 1].precision) / 2;
  }
  return std::clamp(area, 0.0, 1.0);
}

Scalar ptr(const PredictionLog& log, Index ensemble_size) {
  if (ensemble_size < 1) throw Error(ErrorCode::InvalidArgument, "ensemble size must be >= 1");
  if (log.entries.empty()) throw Error(ErrorCode::InvalidArgument, "empty prediction log");
  Index total = 0;
  for (const auto& e : log.entries) {
    if (e.technique_runs < 1 || e.technique_runs > ensemble_size) {
      throw Error(ErrorCode::CountOutOfRange,
                  "query " + std::to_string(e.query_index) + " ran " +
                      std::to_string(e.technique_runs) + " of " + std::to_string(ensemble_size));
    }
    total += e.technique_runs;
  }
  return static_cast<Scalar>(total) /
         (static_cast<Scalar>(log.entries.size()) * static_cast<Scalar>(ensemble_size));
}

EvalReport evaluate(const PredictionLog& log, const GroundTruth& gt) {
  EvalReport r;
  r.queries = static_cast<Index>(log.entries.size());
  r.ensemble_size = log.ensemble_size;
  r.accuracy = accuracy(log, gt);
  r.pr_points = pr_curve(log, gt);
  r.auc = auc(r.pr_points);
  r.ptr = ptr(log, log.ensemble_size);
  for (const auto& e : log.entries) r.reselection_count += e.reselection ? 1 : 0;
  return r;
}

}  // namespace amusic
