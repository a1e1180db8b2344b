#include "amusic/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amusic/error.hpp"
#include "amusic/image.hpp"
#include "amusic/vprd.hpp"

namespace amusic {

using nlohmann::json;

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& path, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + key, "has the wrong type");
  }
}

template <typename T>
T required(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + key, "is required");
  return field<T>(obj, key, path, T{});
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_object(const json& j, const std::string& name) {
  if (!j.is_object()) throw ConfigError(name, "must be a JSON object");
}

SyntheticProfile profile_from_json(const json& j) {
  require_object(j, "profile");
  SyntheticProfile p;
  p.queries = required<Index>(j, "queries", "");
  p.references = field<Index>(j, "references", "", p.queries);
  p.seed = field<std::uint64_t>(j, "seed", "", 0);
  p.peak_gain = field<Scalar>(j, "peak_gain", "", p.peak_gain);
  p.decoy_min_distance = field<Index>(j, "decoy_min_distance", "", p.decoy_min_distance);
  p.tolerance = field<Index>(j, "tolerance", "", p.tolerance);
  if (!j.contains("techniques") || !j["techniques"].is_array()) {
    throw ConfigError("techniques", "must be an array");
  }
  for (const auto& t : j["techniques"]) {
    require_object(t, "techniques");
    SyntheticTechnique tech;
    tech.id = required<std::string>(t, "id", "techniques.");
    if (!t.contains("segments") || !t["segments"].is_array()) {
      throw ConfigError("techniques.segments", "must be an array");
    }
    for (const auto& s : t["segments"]) {
      require_object(s, "techniques.segments");
      CompetenceSegment seg;
      seg.begin = required<Index>(s, "begin", "techniques.segments.");
      seg.end = required<Index>(s, "end", "techniques.segments.");
      seg.competence = required<Scalar>(s, "competence", "techniques.segments.");
      seg.residual = field<Scalar>(s, "residual", "techniques.segments.", 0.0);
      seg.noise = field<Scalar>(s, "noise", "techniques.segments.", 1.0);
      tech.segments.push_back(seg);
    }
    p.techniques.push_back(std::move(tech));
  }
  p.validate();
  return p;
}

GroundTruth ground_truth_from_json(const json& j) {
  require_object(j, "ground_truth");
  const auto mode = field<std::string>(j, "mode", "ground_truth.", "aligned");
  if (mode == "aligned") {
    return GroundTruth::frame_aligned(field<Index>(j, "tolerance", "ground_truth.", 1));
  }
  if (mode == "explicit") {
    if (!j.contains("ranges") || !j["ranges"].is_array()) {
      throw ConfigError("ground_truth.ranges", "must be an array");
    }
    std::vector<std::vector<RefRange>> ranges;
    try {
      for (const auto& per_query : j["ranges"]) {
        auto& out = ranges.emplace_back();
        for (const auto& r : per_query) {
          out.push_back({r.at(0).get<Index>(), r.at(1).get<Index>()});
        }
      }
    } catch (const json::exception&) {
      throw ConfigError("ground_truth.ranges", "expects [[[first, last], ...], ...]");
    }
    return GroundTruth::explicit_ranges(std::move(ranges));
  }
  throw ConfigError("ground_truth.mode", "must be 'aligned' or 'explicit'");
}

json ground_truth_json(const GroundTruth& gt) {
  if (gt.aligned()) return {{"mode", "aligned"}, {"tolerance", gt.tolerance()}};
  json ranges = json::array();
  for (const auto& per_query : gt.ranges()) {
    json q = json::array();
    for (const auto& r : per_query) q.push_back({r.first, r.last});
    ranges.push_back(std::move(q));
  }
  return {{"mode", "explicit"}, {"ranges", std::move(ranges)}};
}

ProviderKind parse_kind(const std::string& s) {
  if (s == "precomputed-scores") return ProviderKind::PrecomputedScores;
  if (s == "precomputed-descriptors") return ProviderKind::PrecomputedDescriptors;
  if (s == "native-hog") return ProviderKind::NativeHog;
  if (s == "synthetic") return ProviderKind::Synthetic;
  throw ConfigError("techniques.kind", "unknown kind '" + s + "'");
}

Pipeline parse_pipeline(const std::string& s) {
  if (s == "baseline") return Pipeline::Baseline;
  if (s == "sic") return Pipeline::Sic;
  if (s == "music") return Pipeline::Music;
  if (s == "amusic") return Pipeline::Amusic;
  throw ConfigError("pipeline", "must be one of baseline, sic, music, amusic");
}

}  // namespace

std::string_view to_string(Pipeline p) {
  switch (p) {
    case Pipeline::Baseline: return "baseline";
    case Pipeline::Sic: return "sic";
    case Pipeline::Music: return "music";
    case Pipeline::Amusic: return "amusic";
  }
  return "unknown";
}

ConfidenceSource RunConfig::effective_confidence() const {
  if (confidence) return *confidence;
  return pipeline == Pipeline::Baseline ? ConfidenceSource::RawScore
                                        : ConfidenceSource::Consistency;
}

void RunConfig::validate() const {
  if (techniques.empty()) throw ConfigError("techniques", "at least one technique required");
  for (std::size_t i = 0; i < techniques.size(); ++i) {
    if (techniques[i].id.empty()) throw ConfigError("techniques.id", "must be non-empty");
    for (std::size_t k = 0; k < i; ++k) {
      if (techniques[k].id == techniques[i].id) {
        throw ConfigError("techniques.id", "duplicate id " + techniques[i].id);
      }
    }
  }
  if ((pipeline == Pipeline::Baseline || pipeline == Pipeline::Sic) && techniques.size() != 1) {
    throw ConfigError("techniques", "baseline and sic pipelines take exactly one technique");
  }
  adaptive.validate();
  if (buffer_frames < 0) throw ConfigError("buffer_frames", "must be >= 0");
  if (pipeline == Pipeline::Amusic && effective_buffer() < adaptive.window) {
    throw ConfigError("buffer_frames", "must be >= window");
  }
}

RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text, "config");
  require_object(j, "config");
  RunConfig cfg;
  cfg.pipeline = parse_pipeline(field<std::string>(j, "pipeline", "", "amusic"));

  if (j.contains("sic")) {
    const json& s = j["sic"];
    require_object(s, "sic");
    cfg.adaptive.sic.top_k = field<Index>(s, "top_k", "sic.", cfg.adaptive.sic.top_k);
    cfg.adaptive.sic.max_lookback =
        field<Index>(s, "max_lookback", "sic.", cfg.adaptive.sic.max_lookback);
    cfg.adaptive.sic.include_current =
        field<bool>(s, "include_current", "sic.", cfg.adaptive.sic.include_current);
    if (cfg.adaptive.sic.top_k < 1) throw ConfigError("sic.top_k", "must be >= 1");
    if (cfg.adaptive.sic.max_lookback < 0) throw ConfigError("sic.max_lookback", "must be >= 0");
  }
  if (j.contains("adaptive")) {
    const json& a = j["adaptive"];
    require_object(a, "adaptive");
    cfg.adaptive.coverage_threshold =
        field<Scalar>(a, "coverage_threshold", "adaptive.", cfg.adaptive.coverage_threshold);
    cfg.adaptive.window = field<Index>(a, "window", "adaptive.", cfg.adaptive.window);
    cfg.adaptive.alpha = field<Scalar>(a, "alpha", "adaptive.", cfg.adaptive.alpha);
    cfg.adaptive.parallel = field<bool>(a, "parallel", "adaptive.", cfg.adaptive.parallel);
    cfg.buffer_frames = field<Index>(a, "buffer_frames", "adaptive.", 0);
    if (!(cfg.adaptive.coverage_threshold > 0 && cfg.adaptive.coverage_threshold <= 1)) {
      throw ConfigError("adaptive.coverage_threshold", "must be in (0, 1]");
    }
    if (cfg.adaptive.window < 2) throw ConfigError("adaptive.window", "must be >= 2");
    if (!(cfg.adaptive.alpha > 0 && cfg.adaptive.alpha < 1)) {
      throw ConfigError("adaptive.alpha", "must be in (0, 1)");
    }
  }
  if (j.contains("ground_truth")) {
    const json& g = j["ground_truth"];
    if (g.is_string()) {
      cfg.ground_truth = parse_ground_truth_json(read_text(resolve(base_dir, g.get<std::string>())));
    } else {
      cfg.ground_truth = ground_truth_from_json(g);
    }
  }
  if (j.contains("confidence")) {
    const auto c = field<std::string>(j, "confidence", "", "");
    if (c == "consistency") {
      cfg.confidence = ConfidenceSource::Consistency;
    } else if (c == "raw") {
      cfg.confidence = ConfidenceSource::RawScore;
    } else {
      throw ConfigError("confidence", "must be 'consistency' or 'raw'");
    }
  }
  cfg.output_dir = resolve(base_dir, field<std::string>(j, "output_dir", "", "out"));
  if (j.contains("seed")) cfg.seed = field<std::uint64_t>(j, "seed", "", 0);

  if (!j.contains("techniques") || !j["techniques"].is_array()) {
    throw ConfigError("techniques", "must be an array");
  }
  for (const auto& t : j["techniques"]) {
    require_object(t, "techniques");
    TechniqueSpec spec;
    spec.id = required<std::string>(t, "id", "techniques.");
    spec.kind = parse_kind(required<std::string>(t, "kind", "techniques."));
    spec.cost_ms = field<double>(t, "cost_ms", "techniques.", 0.0);
    switch (spec.kind) {
      case ProviderKind::PrecomputedScores:
        spec.scores = resolve(base_dir, required<std::string>(t, "scores", "techniques."));
        spec.normalize = field<bool>(t, "normalize", "techniques.", false);
        break;
      case ProviderKind::PrecomputedDescriptors:
        spec.reference = resolve(base_dir, required<std::string>(t, "reference", "techniques."));
        spec.query = resolve(base_dir, required<std::string>(t, "query", "techniques."));
        break;
      case ProviderKind::NativeHog: {
        spec.reference_dir =
            resolve(base_dir, required<std::string>(t, "reference_dir", "techniques."));
        spec.query_dir = resolve(base_dir, required<std::string>(t, "query_dir", "techniques."));
        if (t.contains("hog")) {
          const json& h = t["hog"];
          require_object(h, "techniques.hog");
          spec.hog.width = field<Index>(h, "width", "techniques.hog.", spec.hog.width);
          spec.hog.height = field<Index>(h, "height", "techniques.hog.", spec.hog.height);
          spec.hog.cell = field<Index>(h, "cell", "techniques.hog.", spec.hog.cell);
          spec.hog.bins = field<Index>(h, "bins", "techniques.hog.", spec.hog.bins);
          spec.hog.block = field<Index>(h, "block", "techniques.hog.", spec.hog.block);
          spec.hog.epsilon = field<Scalar>(h, "epsilon", "techniques.hog.", spec.hog.epsilon);
        }
        try {
          spec.hog.validate();
        } catch (const Error& e) {
          throw ConfigError("techniques.hog", e.what());
        }
        break;
      }
      case ProviderKind::Synthetic: {
        if (!t.contains("profile")) throw ConfigError("techniques.profile", "is required");
        const json& p = t["profile"];
        spec.profile = p.is_string()
                           ? parse_synthetic_profile(read_text(resolve(base_dir, p.get<std::string>())))
                           : profile_from_json(p);
        break;
      }
    }
    cfg.techniques.push_back(std::move(spec));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error&) {
    throw ConfigError("config", "cannot read " + path.string());
  }
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_run_config(text, base);
}

SyntheticProfile parse_synthetic_profile(const std::string& json_text) {
  return profile_from_json(parse_json(json_text, "profile"));
}

SyntheticProfile load_synthetic_profile(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error&) {
    throw ConfigError("profile", "cannot read " + path.string());
  }
  return parse_synthetic_profile(text);
}

GroundTruth parse_ground_truth_json(const std::string& json_text) {
  return ground_truth_from_json(parse_json(json_text, "ground_truth"));
}

GroundTruth parse_ground_truth_spec(const std::string& spec) {
  constexpr std::string_view kAligned = "aligned:";
  if (spec.rfind(kAligned, 0) == 0) {
    const std::string tol = spec.substr(kAligned.size());
    try {
      std::size_t used = 0;
      const long v = std::stol(tol, &used);
      if (used != tol.size()) throw std::invalid_argument(tol);
      return GroundTruth::frame_aligned(v);
    } catch (const std::logic_error&) {
      throw ConfigError("ground_truth.tolerance", "bad tolerance '" + tol + "'");
    }
  }
  return parse_ground_truth_json(read_text(spec));
}

std::string ground_truth_to_json(const GroundTruth& gt) { return ground_truth_json(gt).dump(2); }

std::vector<ProviderPtr> build_providers(const RunConfig& cfg) {
  const Index retention = cfg.effective_buffer();
  std::vector<ProviderPtr> out;
  for (const auto& spec : cfg.techniques) {
    std::shared_ptr<TechniqueProvider> p;
    switch (spec.kind) {
      case ProviderKind::PrecomputedScores:
        p = std::make_shared<PrecomputedScoresProvider>(spec.id, load_score_matrix(spec.scores),
                                                        spec.normalize, retention);
        break;
      case ProviderKind::PrecomputedDescriptors:
        p = std::make_shared<PrecomputedDescriptorsProvider>(
            spec.id, load_vprd(spec.reference).data, load_vprd(spec.query).data, retention);
        break;
      case ProviderKind::NativeHog:
        p = std::make_shared<HogProvider>(spec.id, list_files_sorted(spec.reference_dir, ".pgm"),
                                          list_files_sorted(spec.query_dir, ".pgm"), spec.hog,
                                          retention);
        break;
      case ProviderKind::Synthetic: {
        SyntheticProfile profile = *spec.profile;
        if (cfg.seed) profile.seed = *cfg.seed;
        std::size_t index = profile.techniques.size();
        for (std::size_t i = 0; i < profile.techniques.size(); ++i) {
          if (profile.techniques[i].id == spec.id) index = i;
        }
        if (index == profile.techniques.size()) {
          throw ConfigError("techniques.id", "profile has no technique '" + spec.id + "'");
        }
        p = std::make_shared<SyntheticProvider>(profile, index, retention);
        break;
      }
    }
    p->set_cost_ms(spec.cost_ms);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace amusic
