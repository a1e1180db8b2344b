#include "amusic/synthetic.hpp"

#include <random>

#include "amusic/error.hpp"

namespace amusic {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
Scalar unit(std::mt19937_64& gen) { return static_cast<Scalar>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

void SyntheticProfile::validate() const {
  if (queries < 1) throw ConfigError("queries", "must be >= 1");
  if (references < 2) throw ConfigError("references", "must be >= 2");
  if (queries > references) {
    throw ConfigError("queries", "frame-aligned scenario needs queries <= references");
  }
  if (!(peak_gain > 0)) throw ConfigError("peak_gain", "must be > 0");
  if (tolerance < 0) throw ConfigError("tolerance", "must be >= 0");
  if (decoy_min_distance <= tolerance) {
    throw ConfigError("decoy_min_distance", "must exceed the ground-truth tolerance");
  }
  if (references <= 2 * decoy_min_distance) {
    throw ConfigError("decoy_min_distance", "leaves no room for decoys");
  }
  if (techniques.empty()) throw ConfigError("techniques", "at least one technique required");
  for (const auto& t : techniques) {
    if (t.id.empty()) throw ConfigError("techniques.id", "must be non-empty");
    for (const auto& other : techniques) {
      if (&other != &t && other.id == t.id) throw ConfigError("techniques.id", "duplicate id " + t.id);
    }
    Index covered = 0;
    for (const auto& s : t.segments) {
      if (s.begin != covered || s.end <= s.begin) {
        throw ConfigError("techniques.segments",
                          t.id + ": segments must be contiguous, ordered and non-empty from 0");
      }
      if (!(s.competence >= 0 && s.competence <= 1)) {
        throw ConfigError("techniques.segments.competence", t.id + ": must be in [0, 1]");
      }
      if (!(s.residual >= 0 && s.residual < 1)) {
        throw ConfigError("techniques.segments.residual", t.id + ": must be in [0, 1)");
      }
      if (!(s.noise > 0)) throw ConfigError("techniques.segments.noise", t.id + ": must be > 0");
      covered = s.end;
    }
    if (covered != queries) {
      throw ConfigError("techniques.segments", t.id + ": segments must cover [0, queries)");
    }
  }
}

SyntheticProvider::SyntheticProvider(const SyntheticProfile& profile, std::size_t technique,
                                     Index retention)
    : TechniqueProvider(profile.techniques.at(technique).id, retention),
      queries_(profile.queries),
      references_(profile.references),
      stream_seed_(splitmix64(profile.seed) ^ fnv1a(profile.techniques[technique].id)),
      peak_gain_(profile.peak_gain),
      decoy_min_distance_(profile.decoy_min_distance),
      segments_(profile.techniques[technique].segments) {
  profile.validate();
}

const CompetenceSegment& SyntheticProvider::segment_for(Index query) const {
  for (const auto& s : segments_) {
    if (query >= s.begin && query < s.end) return s;
  }
  throw Error(ErrorCode::IndexOutOfRange, id() + ": no segment for query " + std::to_string(query));
}

bool SyntheticProvider::competent_on(Index query) const {
  check_query(query);
  std::mt19937_64 gen(splitmix64(stream_seed_ + static_cast<std::uint64_t>(query)));
  return unit(gen) < segment_for(query).competence;
}

ScoreVector SyntheticProvider::score(Index query) const {
  check_query(query);
  const CompetenceSegment& seg = segment_for(query);
  std::mt19937_64 gen(splitmix64(stream_seed_ + static_cast<std::uint64_t>(query)));
  const bool competent = unit(gen) < seg.competence;
  const Scalar decoy_draw = unit(gen);

  ScoreVector s(references_);
  for (Index i = 0; i < references_; ++i) s(i) = seg.noise * unit(gen);

  const Scalar peak = seg.noise + peak_gain_;
  const Index truth = query;
  if (competent) {
    s(truth) = peak;
    return s;
  }
  // Map the draw onto the references at least decoy_min_distance away from truth.
  const Index lo = std::max<Index>(0, truth - decoy_min_distance_ + 1);
  const Index hi = std::min<Index>(references_, truth + decoy_min_distance_);
  const Index eligible = references_ - (hi - lo);
  Index decoy = std::min<Index>(static_cast<Index>(decoy_draw * static_cast<Scalar>(eligible)),
                                eligible - 1);
  if (decoy >= lo) decoy += hi - lo;
  s(decoy) = peak;
  s(truth) = seg.residual * peak;
  return s;
}

std::vector<ProviderPtr> make_synthetic_providers(const SyntheticProfile& profile, Index retention) {
  profile.validate();
  std::vector<ProviderPtr> out;
  for (std::size_t i = 0; i < profile.techniques.size(); ++i) {
    out.push_back(std::make_shared<SyntheticProvider>(profile, i, retention));
  }
  return out;
}

RowMatrix synthetic_score_matrix(const SyntheticProvider& provider) {
  RowMatrix m(provider.query_count(), provider.reference_count());
  for (Index q = 0; q < provider.query_count(); ++q) m.row(q) = provider.score(q).transpose();
  return m;
}

}  // namespace amusic
