#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ICLS localization-attack simulator"};
  app.require_subcommand(1);

  icls::cli::Invocation inv;
  unsigned long long seed = 0;
  std::string case_name;

  auto add_common = [&](CLI::App* cmd, bool needs_case) {
    cmd->add_option("--config", inv.config_path,
                    "Config file (omit for built-in defaults)");
    cmd->add_option("--out", inv.output_dir, "Output directory");
    cmd->add_option("--seed", seed, "Master seed override")
        ->check(CLI::NonNegativeNumber);
    auto* c = cmd->add_option("--case", case_name,
                              "Case: none|jam|spoof|beacon_sync|relay_af");
    if (needs_case) c->required();
    cmd->add_flag("-v,--verbose", inv.verbosity, "Verbose output");
  };

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run the full case x power Monte-Carlo sweep");
  add_common(sweep_cmd, false);
  auto* case_cmd = app.add_subcommand("case", "Run a single attack case");
  add_common(case_cmd, true);
  auto* roc_cmd =
      app.add_subcommand("roc", "Detection/false-alarm rates vs KL threshold");
  add_common(roc_cmd, false);
  auto* cal_cmd = app.add_subcommand(
      "calibrate", "Detector calibration report and fingerprint map");
  add_common(cal_cmd, false);
  auto* self_cmd =
      app.add_subcommand("selftest", "Run the built-in example checks");
  self_cmd->add_flag("-v,--verbose", inv.verbosity, "Verbose output");

  CLI11_PARSE(app, argc, argv);

  if (sweep_cmd->parsed()) inv.command = icls::cli::Command::Sweep;
  if (case_cmd->parsed()) inv.command = icls::cli::Command::Case;
  if (roc_cmd->parsed()) inv.command = icls::cli::Command::Roc;
  if (cal_cmd->parsed()) inv.command = icls::cli::Command::Calibrate;
  if (self_cmd->parsed()) inv.command = icls::cli::Command::Selftest;
  for (auto* cmd : {sweep_cmd, case_cmd, roc_cmd, cal_cmd})
    if (cmd->parsed()) {
      if (cmd->count("--seed")) inv.seed_override = seed;
      if (cmd->count("--case")) inv.case_override = case_name;
    }

  return icls::cli::dispatch(inv);
}
