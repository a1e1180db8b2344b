#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "amusic/adaptive.hpp"
#include "amusic/evaluation.hpp"
#include "amusic/hog.hpp"
#include "amusic/provider.hpp"
#include "amusic/synthetic.hpp"

namespace amusic {

enum class Pipeline { Baseline, Sic, Music, Amusic };

std::string_view to_string(Pipeline p);

/// What the PR sweep thresholds: winning consistency, or the raw top score.
enum class ConfidenceSource { Consistency, RawScore };

struct TechniqueSpec {
  std::string id;
  ProviderKind kind = ProviderKind::PrecomputedScores;
  // precomputed-scores
  std::filesystem::path scores;
  bool normalize = false;
  // precomputed-descriptors
  std::filesystem::path reference;
  std::filesystem::path query;
  // native-hog
  std::filesystem::path reference_dir;
  std::filesystem::path query_dir;
  HogConfig hog;
  // synthetic
  std::optional<SyntheticProfile> profile;

  double cost_ms = 0;
};

struct RunConfig {
  Pipeline pipeline = Pipeline::Amusic;
  std::vector<TechniqueSpec> techniques;
  AdaptiveConfig adaptive;  // carries the SIC settings too
  GroundTruth ground_truth = GroundTruth::frame_aligned(1);
  std::optional<ConfidenceSource> confidence;  // default depends on pipeline
  std::filesystem::path output_dir = "out";
  /// Overrides the seed of synthetic techniques when set.
  std::optional<std::uint64_t> seed;
  /// Frames a provider keeps for retroactive rescoring; 0 means 2 * window.
  Index buffer_frames = 0;

  ConfidenceSource effective_confidence() const;
  Index effective_buffer() const { return buffer_frames > 0 ? buffer_frames : 2 * adaptive.window; }
  void validate() const;
};

/// Parses a run configuration; relative paths resolve against `base_dir`.
/// Throws ConfigError naming the offending field.
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

SyntheticProfile parse_synthetic_profile(const std::string& json_text);
SyntheticProfile load_synthetic_profile(const std::filesystem::path& path);

/// Accepts `aligned:<tolerance>` or a path to a ground-truth JSON file.
GroundTruth parse_ground_truth_spec(const std::string& spec);
GroundTruth parse_ground_truth_json(const std::string& json_text);
std::string ground_truth_to_json(const GroundTruth& gt);

/// Instantiates every technique of `cfg` (reads data files; may throw data errors).
std::vector<ProviderPtr> build_providers(const RunConfig& cfg);

}  // namespace amusic
