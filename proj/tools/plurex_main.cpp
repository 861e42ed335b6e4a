#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "plurex/pipeline.hpp"

namespace {

// Flags shared by the stage subcommands; only flags the user passed
// override the config file.
struct CommonFlags {
  std::string config_path;
  std::string output_dir;
  uint64_t seed = 0;
  double delta = 0.0, epsilon = 0.0, spacing_t = 0.0, spacing_w = 0.0, tol = 0.0;
  double eta_diagonals = 0.0, gap_threshold = 0.0;
  int max_iters = 0;

  CLI::App* attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--out", output_dir, "output directory");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--delta", delta, "enlargement delta");
    cmd->add_option("--epsilon", epsilon, "approximation epsilon");
    cmd->add_option("--spacing-t", spacing_t, "grid spacing along t");
    cmd->add_option("--spacing-w", spacing_w, "grid spacing along Re w / Im w");
    cmd->add_option("--tol", tol, "solver residual tolerance");
    cmd->add_option("--max-iters", max_iters, "solver sweep budget");
    cmd->add_option("--eta-diagonals", eta_diagonals, "K-collar radius in grid diagonals");
    cmd->add_option("--gap-threshold", gap_threshold, "required separation over V");
    return cmd;
  }

  plurex::PipelineConfig build(CLI::App* cmd) const {
    plurex::PipelineConfig cfg;
    if (!config_path.empty()) cfg = plurex::PipelineConfig::from_file(config_path);
    if (cmd->count("--out")) cfg.output_dir = output_dir;
    if (cmd->count("--seed")) cfg.seed = seed;
    if (cmd->count("--delta")) cfg.delta = delta;
    if (cmd->count("--epsilon")) cfg.epsilon = epsilon;
    if (cmd->count("--spacing-t")) cfg.spacing_t = spacing_t;
    if (cmd->count("--spacing-w")) cfg.spacing_w = spacing_w;
    if (cmd->count("--tol")) cfg.tol = tol;
    if (cmd->count("--max-iters")) cfg.max_iters = max_iters;
    if (cmd->count("--eta-diagonals")) cfg.eta_diagonals = eta_diagonals;
    if (cmd->count("--gap-threshold")) cfg.gap_threshold = gap_threshold;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plurex: domain certification and boundary relative extremal envelopes"};
  app.require_subcommand(1);

  CommonFlags certify_flags, psh_flags, witness_flags, envelope_flags, all_flags;
  std::string which = "all";
  std::string export_result = "omega2", export_plane = "w0", export_format = "csv";
  std::string export_dir = "out", summarize_dir = "out";

  auto* cmd_certify = certify_flags.attach(app.add_subcommand("certify", "profile certification"));
  auto* cmd_psh = psh_flags.attach(app.add_subcommand("psh", "plurisubharmonicity checks"));
  auto* cmd_witness = witness_flags.attach(app.add_subcommand("witness", "witness bound checks"));
  auto* cmd_envelope = envelope_flags.attach(app.add_subcommand("envelope", "envelope solves"));
  cmd_envelope->add_option("--which", which, "omega1|omega2|gap|all")
      ->check(CLI::IsMember({"omega1", "omega2", "gap", "all"}));
  auto* cmd_all = all_flags.attach(app.add_subcommand("all", "full pipeline"));
  auto* cmd_export = app.add_subcommand("export", "re-slice a stored envelope result");
  cmd_export->add_option("--out", export_dir, "pipeline output directory");
  cmd_export->add_option("--result", export_result, "omega1_proxy|omega2");
  cmd_export->add_option("--plane", export_plane, "w0 or t:<value>");
  cmd_export->add_option("--format", export_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* cmd_summarize = app.add_subcommand("summarize", "tabulate stage results");
  cmd_summarize->add_option("--out", summarize_dir, "pipeline output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_certify->parsed()) {
      auto cfg = certify_flags.build(cmd_certify);
      cfg.stages = {"certify"};
      return plurex::run_pipeline(cfg);
    }
    if (cmd_psh->parsed()) {
      auto cfg = psh_flags.build(cmd_psh);
      cfg.stages = {"psh"};
      return plurex::run_pipeline(cfg);
    }
    if (cmd_witness->parsed()) {
      auto cfg = witness_flags.build(cmd_witness);
      cfg.stages = {"witness"};
      return plurex::run_pipeline(cfg);
    }
    if (cmd_envelope->parsed()) {
      auto cfg = envelope_flags.build(cmd_envelope);
      if (which == "omega1") {
        cfg.stages = {"omega1"};
      } else if (which == "omega2") {
        cfg.stages = {"omega2"};
      } else {
        cfg.stages = {"omega1", "omega2", "gap"};
      }
      return plurex::run_pipeline(cfg);
    }
    if (cmd_all->parsed()) {
      auto cfg = all_flags.build(cmd_all);
      cfg.stages = {"certify", "psh", "witness", "omega1", "omega2", "gap"};
      return plurex::run_pipeline(cfg);
    }
    if (cmd_export->parsed()) {
      const std::string path =
          plurex::export_slice(export_dir, export_result, export_plane, export_format);
      std::printf("wrote %s\n", path.c_str());
      return 0;
    }
    if (cmd_summarize->parsed()) {
      std::fputs(plurex::summarize(summarize_dir).c_str(), stdout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
