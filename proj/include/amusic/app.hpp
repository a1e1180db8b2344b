#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "amusic/config.hpp"
#include "amusic/evaluation.hpp"

namespace amusic {

/// Optional per-run log destinations; null streams are skipped.
struct PipelineSinks {
  std::ostream* predictions = nullptr;  // every pipeline
  std::ostream* corrections = nullptr;  // sic
  std::ostream* arbitration = nullptr;  // music, amusic
  std::ostream* events = nullptr;       // amusic
};

struct PipelineResult {
  PredictionLog log;
  std::vector<Index> wins;  // frames won per technique
};

/// Runs one pipeline over every query. `cfg.sic` configures SIC for all but the baseline.
PipelineResult run_pipeline(Pipeline pipeline, const std::vector<ProviderPtr>& providers,
                            const AdaptiveConfig& cfg, ConfidenceSource confidence,
                            const PipelineSinks& sinks = {});

// Exit codes shared by the command-line entry points.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// Executes a run config and writes predictions.csv, report.json, pr.csv,
/// coverage.json, ground_truth.json and the pipeline's logs into its output dir.
int cmd_run(const std::filesystem::path& config_path, const RunOptions& opts, std::ostream& out,
            std::ostream& err);

/// Writes one VPRD score matrix per technique, ground_truth.json and a ready-to-run config.json.
int cmd_synth(const std::filesystem::path& profile_path, const std::filesystem::path& out_dir,
              std::optional<std::uint64_t> seed, bool quiet, std::ostream& out, std::ostream& err);

/// Evaluates a predictions.csv; prints the report JSON on `out`.
int cmd_eval(const std::filesystem::path& log_path, const std::string& gt_spec, std::ostream& out,
             std::ostream& err);

/// CSV <-> VPRD, direction chosen by the input extension.
int cmd_convert(const std::filesystem::path& in, const std::filesystem::path& out_path,
                VprdRole role, bool quiet, std::ostream& out, std::ostream& err);

}  // namespace amusic
