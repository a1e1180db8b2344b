#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "amusic/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multi-technique visual place recognition with self-correction"};
  app.require_subcommand(1);

  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress progress output");

  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a pipeline from a JSON config");
  run->add_option("--config,config", config, "Run configuration (JSON)")->required();
  run->add_option("--out", out_dir, "Override the config's output_dir");
  run->add_option("--seed", seed, "Override the seed of synthetic techniques");
  run->add_flag("--quiet,-q", quiet, "Suppress progress output");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark from a profile");
  synth->add_option("--config,profile", config, "Synthetic profile (JSON)")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--seed", seed, "Override the profile seed");
  synth->add_flag("--quiet,-q", quiet, "Suppress progress output");

  std::string log_path;
  std::string gt = "aligned:1";
  auto* eval = app.add_subcommand("eval", "Evaluate a predictions.csv log");
  eval->add_option("--log,log", log_path, "Prediction log (CSV)")->required();
  eval->add_option("--gt", gt, "aligned:<tolerance> or a ground-truth JSON file");

  std::string in_path;
  std::string role = "scores";
  auto* convert = app.add_subcommand("convert", "Convert score/descriptor matrices CSV <-> VPRD");
  convert->add_option("--in,input", in_path, "Input file (.csv or .vprd)")->required();
  convert->add_option("--out,output", out_dir, "Output file")->required();
  convert->add_option("--role", role, "VPRD role when writing VPRD")
      ->check(CLI::IsMember({"scores", "descriptors"}));
  convert->add_flag("--quiet,-q", quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : amusic::kExitConfig;
  }

  if (*run) {
    amusic::RunOptions opts;
    if (!out_dir.empty()) opts.output_dir = out_dir;
    opts.seed = seed;
    opts.quiet = quiet;
    return amusic::cmd_run(config, opts, std::cout, std::cerr);
  }
  if (*synth) return amusic::cmd_synth(config, out_dir, seed, quiet, std::cout, std::cerr);
  if (*eval) return amusic::cmd_eval(log_path, gt, std::cout, std::cerr);
  if (*convert) {
    const auto r = role == "descriptors" ? amusic::VprdRole::Descriptors : amusic::VprdRole::Scores;
    return amusic::cmd_convert(in_path, out_dir, r, quiet, std::cout, std::cerr);
  }
  return amusic::kExitInternal;
}
