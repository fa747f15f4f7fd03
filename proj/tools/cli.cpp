#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "icls/config.hpp"

namespace icls::cli {

namespace {

namespace fs = std::filesystem;

ExperimentConfig load(const Invocation& inv) {
  ExperimentConfig cfg = inv.config_path.empty()
                             ? parse_config("")
                             : load_config_file(inv.config_path);
  if (inv.seed_override) cfg.master_seed = *inv.seed_override;
  if (inv.case_override) cfg.cases = {case_from_name(*inv.case_override)};
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

fs::path prepare_output_dir(const std::string& dir) {
  fs::path p(dir.empty() ? "." : dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw std::runtime_error("cannot create output dir " + p.string());
  return p;
}

void print_rows(const std::vector<ResultRow>& rows) {
  std::printf("%-12s %8s %8s %10s %10s %11s %9s\n", "case", "power", "pl",
              "header_ber", "detection", "false_alarm", "mean_kl");
  for (const auto& r : rows)
    std::printf("%-12s %8.6g %8.4f %10.6g %10.4f %11.4f %9.4g\n",
                std::string(case_name(r.case_id)).c_str(), r.target_power_dbm,
                r.pl, r.header_ber, r.detection_rate, r.false_alarm_rate,
                r.mean_kl);
}

int run_sweep(const Invocation& inv) {
  const ExperimentConfig cfg = load(inv);
  const fs::path out_dir = prepare_output_dir(inv.output_dir);
  const auto rows = sweep(cfg);
  write_file(out_dir / "sweep.csv", results_to_csv(rows));
  print_rows(rows);
  std::printf("wrote %s\n", (out_dir / "sweep.csv").string().c_str());
  return 0;
}

int run_one_case(const Invocation& inv) {
  if (!inv.case_override)
    throw ConfigError("the case subcommand needs --case NAME");
  ExperimentConfig cfg = load(inv);
  const AttackCase c = cfg.cases.front();
  std::vector<ResultRow> rows;
  for (double power : cfg.target_powers_dbm)
    rows.push_back(run_case(c, power, cfg));
  const fs::path out_dir = prepare_output_dir(inv.output_dir);
  const std::string name = "case_" + std::string(case_name(c)) + ".csv";
  write_file(out_dir / name, results_to_csv(rows));
  print_rows(rows);
  std::printf("wrote %s\n", (out_dir / name).string().c_str());
  return 0;
}

int run_roc(const Invocation& inv) {
  const ExperimentConfig cfg = load(inv);
  const fs::path out_dir = prepare_output_dir(inv.output_dir);
  const auto rows = roc_sweep(cfg, cfg.roc_thresholds);
  write_file(out_dir / "roc.csv", roc_to_csv(rows));
  std::printf("wrote %s (%zu rows)\n", (out_dir / "roc.csv").string().c_str(),
              rows.size());
  return 0;
}

int run_calibrate(const Invocation& inv) {
  const ExperimentConfig cfg = load(inv);
  const fs::path out_dir = prepare_output_dir(inv.output_dir);

  std::string report = "detector calibration report\n";
  for (double power : cfg.target_powers_dbm) {
    const CalibrationReport rep = calibrate_point(cfg, power);
    report += format_report(rep);
    const PowerGapRates gaps = power_gap_study(cfg, power);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "  power-gap detector (%.6g dB, quorum %d): beacon_sync "
                  "%.6g, benign %.6g\n",
                  cfg.detector.power_gap_db, cfg.detector.power_gap_quorum,
                  gaps.beacon_sync_rate, gaps.benign_rate);
    report += buf;
  }
  std::fputs(report.c_str(), stdout);
  write_file(out_dir / "calibration.txt", report);

  const Deployment dep = cfg.deployment.build();
  const FingerprintMap map =
      expected_fingerprints(dep, cfg.channel, cfg.target_powers_dbm.front());
  write_file(out_dir / "fingerprints.csv", fingerprints_to_csv(map));
  std::printf("wrote %s and %s\n", (out_dir / "calibration.txt").string().c_str(),
              (out_dir / "fingerprints.csv").string().c_str());
  return 0;
}

}  // namespace

int dispatch(const Invocation& inv) {
  try {
    switch (inv.command) {
      case Command::Sweep: return run_sweep(inv);
      case Command::Case: return run_one_case(inv);
      case Command::Roc: return run_roc(inv);
      case Command::Calibrate: return run_calibrate(inv);
      case Command::Selftest: return run_selftest(inv.verbosity > 0) == 0 ? 0 : 1;
    }
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace icls::cli
