#include "amusic/provider.hpp"

#include <algorithm>

#include "amusic/error.hpp"
#include "amusic/score.hpp"

namespace amusic {

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::NativeHog: return "native-hog";
    case ProviderKind::PrecomputedDescriptors: return "precomputed-descriptors";
    case ProviderKind::PrecomputedScores: return "precomputed-scores";
    case ProviderKind::Synthetic: return "synthetic";
  }
  return "unknown";
}

void TechniqueProvider::check_query(Index query) const {
  if (query < 0 || query >= query_count()) {
    throw Error(ErrorCode::IndexOutOfRange, id_ + ": query " + std::to_string(query) +
                                                " outside [0, " + std::to_string(query_count()) +
                                                ")");
  }
}

ScoreVector cosine_score_vector(const Eigen::Ref<const VectorX<Scalar>>& query,
                                const RowMatrix& refs) {
  if (query.size() != refs.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "query has " + std::to_string(query.size()) +
                                              " dims, references have " +
                                              std::to_string(refs.cols()));
  }
  const Scalar qn = query.norm();
  if (qn == 0) throw Error(ErrorCode::ZeroVector, "query descriptor has zero norm");
  const VectorX<Scalar> ref_norms = refs.rowwise().norm();
  for (Index i = 0; i < ref_norms.size(); ++i) {
    if (ref_norms(i) == 0) {
      throw Error(ErrorCode::ZeroVector, "reference " + std::to_string(i) + " has zero norm");
    }
  }
  return ((refs * query).array() / (ref_norms.array() * qn)).cwiseMax(-1.0).cwiseMin(1.0);
}

namespace {

// Cosine scores with zero-norm operands scoring 0 instead of failing.
ScoreVector tolerant_cosine(const Eigen::Ref<const VectorX<Scalar>>& query, const RowMatrix& refs) {
  if (query.size() != refs.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "query has " + std::to_string(query.size()) +
                                              " dims, references have " +
                                              std::to_string(refs.cols()));
  }
  const Scalar qn = query.norm();
  if (qn == 0) return ScoreVector::Zero(refs.rows());
  const VectorX<Scalar> dots = refs * query;
  ScoreVector out(refs.rows());
  for (Index i = 0; i < refs.rows(); ++i) {
    const Scalar rn = refs.row(i).norm();
    out(i) = rn == 0 ? 0.0 : std::clamp(dots(i) / (rn * qn), -1.0, 1.0);
  }
  return out;
}

}  // namespace

PrecomputedScoresProvider::PrecomputedScoresProvider(std::string id, RowMatrix scores,
                                                     bool normalize, Index retention)
    : TechniqueProvider(std::move(id), retention),
      scores_(std::move(scores)),
      normalize_(normalize) {
  if (scores_.rows() < 1 || scores_.cols() < 2) {
    throw Error(ErrorCode::ShapeMismatch, this->id() + ": score matrix needs >= 1 query and >= 2 references");
  }
  if (!scores_.allFinite()) throw Error(ErrorCode::NonFiniteValue, this->id() + ": non-finite score");
}

ScoreVector PrecomputedScoresProvider::score(Index query) const {
  check_query(query);
  ScoreVector row = scores_.row(query).transpose();
  if (normalize_) return normalize_scores(row).values;
  return row;
}

PrecomputedDescriptorsProvider::PrecomputedDescriptorsProvider(std::string id,
                                                               RowMatrix references,
                                                               RowMatrix queries, Index retention)
    : TechniqueProvider(std::move(id), retention),
      references_(std::move(references)),
      queries_(std::move(queries)) {
  if (references_.rows() < 2 || queries_.rows() < 1) {
    throw Error(ErrorCode::ShapeMismatch, this->id() + ": need >= 2 references and >= 1 query");
  }
  if (references_.cols() != queries_.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                this->id() + ": reference dims " + std::to_string(references_.cols()) +
                    " != query dims " + std::to_string(queries_.cols()));
  }
}

ScoreVector PrecomputedDescriptorsProvider::score(Index query) const {
  check_query(query);
  return tolerant_cosine(queries_.row(query).transpose(), references_);
}

HogProvider::HogProvider(std::string id, const std::vector<std::filesystem::path>& reference_images,
                         std::vector<std::filesystem::path> query_images, HogConfig cfg,
                         Index retention)
    : TechniqueProvider(std::move(id), retention), cfg_(cfg), queries_(std::move(query_images)) {
  cfg_.validate();
  if (reference_images.size() < 2 || queries_.empty()) {
    throw Error(ErrorCode::InvalidArgument, this->id() + ": need >= 2 reference images and >= 1 query image");
  }
  references_.resize(static_cast<Index>(reference_images.size()), cfg_.descriptor_length());
  for (std::size_t i = 0; i < reference_images.size(); ++i) {
    references_.row(static_cast<Index>(i)) =
        hog_descriptor(load_pgm(reference_images[i]), cfg_).transpose();
  }
}

ScoreVector HogProvider::score(Index query) const {
  check_query(query);
  const Descriptor d = hog_descriptor(load_pgm(queries_[static_cast<std::size_t>(query)]), cfg_);
  return tolerant_cosine(d, references_);
}

}  // namespace amusic
