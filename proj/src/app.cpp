#include "amusic/app.hpp"

#include <deque>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "amusic/error.hpp"
#include "amusic/logs.hpp"
#include "amusic/vprd.hpp"

namespace amusic {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> provider_ids(const std::vector<ProviderPtr>& providers) {
  std::vector<std::string> ids;
  for (const auto& p : providers) ids.push_back(p->id());
  return ids;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

PipelineResult run_pipeline(Pipeline pipeline, const std::vector<ProviderPtr>& providers,
                            const AdaptiveConfig& cfg, ConfidenceSource confidence,
                            const PipelineSinks& sinks) {
  const Index queries = common_query_count(providers);
  const auto ids = provider_ids(providers);
  const bool single = pipeline == Pipeline::Baseline || pipeline == Pipeline::Sic;
  if (single && providers.size() != 1) {
    throw ConfigError("techniques", "baseline and sic pipelines take exactly one technique");
  }

  PipelineResult res;
  res.log.ensemble_size = static_cast<Index>(providers.size());
  res.wins.assign(providers.size(), 0);
  if (sinks.predictions) write_prediction_header(*sinks.predictions);
  auto emit = [&](const PredictionEntry& e) {
    res.log.entries.push_back(e);
    if (sinks.predictions) write_prediction_row(*sinks.predictions, e, res.log.ensemble_size);
  };
  const bool by_consistency = confidence == ConfidenceSource::Consistency;

  switch (pipeline) {
    case Pipeline::Baseline: {
      const auto& provider = *providers.front();
      for (Index q = 0; q < queries; ++q) {
        const ScoreVector raw = provider.score(q);
        const Index best = argmax(raw);
        emit({q, best, raw(best), 1, false});
        ++res.wins[0];
      }
      break;
    }
    case Pipeline::Sic: {
      const auto& provider = *providers.front();
      SicTracker tracker(cfg.sic);
      if (sinks.corrections) write_correction_header(*sinks.corrections);
      for (Index q = 0; q < queries; ++q) {
        const ScoreVector raw = provider.score(q);
        const CorrectionRecord rec = tracker.observe(raw);
        if (sinks.corrections) write_correction_row(*sinks.corrections, rec);
        emit({q, rec.corrected_match,
              by_consistency ? rec.winning_consistency : raw(rec.original_match), 1, false});
        ++res.wins[0];
      }
      break;
    }
    case Pipeline::Music: {
      MusicEngine engine(providers, cfg.sic, cfg.window, cfg.parallel);
      if (sinks.arbitration) write_arbitration_header(*sinks.arbitration, ids);
      for (Index q = 0; q < queries; ++q) {
        const FrameArbitration frame = engine.step();
        if (sinks.arbitration) write_arbitration_row(*sinks.arbitration, frame, ids);
        const Scalar conf = by_consistency ? frame.winner_consistency
                                           : frame.record_for(frame.winner)->original_score;
        emit({q, frame.prediction, conf, res.log.ensemble_size, false});
        ++res.wins[frame.winner];
      }
      break;
    }
    case Pipeline::Amusic: {
      AdaptiveController ctrl(providers, cfg);
      if (sinks.arbitration) write_arbitration_header(*sinks.arbitration, ids);
      // a frame's technique count is only final once its window has closed
      std::deque<PredictionEntry> pending;
      auto flush = [&](Index until) {
        while (!pending.empty() && pending.front().query_index < until) {
          pending.front().technique_runs = ctrl.technique_runs(pending.front().query_index);
          emit(pending.front());
          pending.pop_front();
        }
      };
      while (!ctrl.done()) {
        const StepResult step = ctrl.step();
        if (sinks.arbitration) write_arbitration_row(*sinks.arbitration, step.arbitration, ids);
        if (sinks.events) {
          auto& ev = *sinks.events;
          ev << frame_event_json(step, ids) << '\n';
          if (step.initial_selection) ev << selection_event_json(*step.initial_selection, ids) << '\n';
          if (step.window_test) ev << window_event_json(*step.window_test) << '\n';
          if (step.reselection) ev << reselection_event_json(*step.reselection, ids) << '\n';
        }
        const Scalar conf = by_consistency
                                ? step.consistency
                                : step.arbitration.record_for(step.chosen)->original_score;
        pending.push_back({step.query_index, step.prediction, conf, 0, step.reselection.has_value()});
        ++res.wins[step.chosen];
        flush(ctrl.finalized_until());
      }
      flush(queries);
      break;
    }
  }
  return res;
}

int cmd_run(const fs::path& config_path, const RunOptions& opts, std::ostream& out,
            std::ostream& err) {
  try {
    RunConfig cfg = load_run_config(config_path);
    if (opts.output_dir) cfg.output_dir = *opts.output_dir;
    if (opts.seed) cfg.seed = *opts.seed;
    const auto providers = build_providers(cfg);

    fs::create_directories(cfg.output_dir);
    const fs::path dir = cfg.output_dir;
    auto predictions = open_out(dir / "predictions.csv");
    std::ofstream corrections, arbitration, events;
    PipelineSinks sinks;
    sinks.predictions = &predictions;
    if (cfg.pipeline == Pipeline::Sic) {
      corrections = open_out(dir / "corrections.csv");
      sinks.corrections = &corrections;
    }
    if (cfg.pipeline == Pipeline::Music || cfg.pipeline == Pipeline::Amusic) {
      arbitration = open_out(dir / "arbitration.csv");
      sinks.arbitration = &arbitration;
    }
    if (cfg.pipeline == Pipeline::Amusic) {
      events = open_out(dir / "events.jsonl");
      sinks.events = &events;
    }

    const PipelineResult result =
        run_pipeline(cfg.pipeline, providers, cfg.adaptive, cfg.effective_confidence(), sinks);
    const EvalReport report = evaluate(result.log, cfg.ground_truth);

    std::vector<std::string> ids;
    for (const auto& p : providers) ids.push_back(p->id());
    write_text(dir / "report.json", report_to_json(report));
    write_text(dir / "coverage.json", coverage_summary_json(ids, result.wins));
    write_text(dir / "ground_truth.json", ground_truth_to_json(cfg.ground_truth) + "\n");
    auto pr = open_out(dir / "pr.csv");
    write_pr_csv(pr, report.pr_points);

    if (!opts.quiet) {
      out << to_string(cfg.pipeline) << ": " << report.queries << " queries, accuracy "
          << format_real(report.accuracy) << ", auc " << format_real(report.auc) << ", ptr "
          << format_real(report.ptr) << ", reselections " << report.reselection_count << "\n"
          << "wrote " << dir.string() << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_synth(const fs::path& profile_path, const fs::path& out_dir,
              std::optional<std::uint64_t> seed, bool quiet, std::ostream& out,
              std::ostream& err) {
  try {
    SyntheticProfile profile = load_synthetic_profile(profile_path);
    if (seed) profile.seed = *seed;
    fs::create_directories(out_dir);

    nlohmann::ordered_json techniques = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < profile.techniques.size(); ++i) {
      const SyntheticProvider provider(profile, i);
      const std::string file = provider.id() + ".vprd";
      save_vprd(out_dir / file, {VprdRole::Scores, synthetic_score_matrix(provider)});
      techniques.push_back({{"id", provider.id()}, {"kind", "precomputed-scores"}, {"scores", file}});
    }
    write_text(out_dir / "ground_truth.json",
               ground_truth_to_json(GroundTruth::frame_aligned(profile.tolerance)) + "\n");

    const AdaptiveConfig defaults;
    nlohmann::ordered_json cfg;
    cfg["pipeline"] = "amusic";
    cfg["techniques"] = std::move(techniques);
    cfg["sic"] = {{"top_k", defaults.sic.top_k}, {"max_lookback", defaults.sic.max_lookback}};
    cfg["adaptive"] = {{"coverage_threshold", defaults.coverage_threshold},
                       {"window", defaults.window},
                       {"alpha", defaults.alpha}};
    cfg["ground_truth"] = "ground_truth.json";
    cfg["output_dir"] = "run";
    write_text(out_dir / "config.json", cfg.dump(2) + "\n");

    if (!quiet) {
      out << "wrote " << profile.techniques.size() << " score matrices ("
          << profile.queries << "x" << profile.references << ") to " << out_dir.string() << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "profile error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_eval(const fs::path& log_path, const std::string& gt_spec, std::ostream& out,
             std::ostream& err) {
  try {
    const GroundTruth gt = parse_ground_truth_spec(gt_spec);
    std::ifstream in(log_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + log_path.string());
    const PredictionLog log = read_prediction_log(in);
    out << report_to_json(evaluate(log, gt));
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "ground truth error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_convert(const fs::path& in, const fs::path& out_path, VprdRole role, bool quiet,
                std::ostream& out, std::ostream& err) {
  try {
    if (in.extension() == ".csv") {
      save_vprd(out_path, {role, load_score_csv(in)});
    } else {
      save_score_csv(out_path, load_vprd(in).data);
    }
    if (!quiet) out << "wrote " << out_path.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace amusic
