#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icls/detection.hpp"
#include "icls/localization.hpp"

namespace icls {

struct DeploymentConfig {
  double ring_radius_m = 12.0;
  double candidate_offset_m = 2.0;
  std::optional<double> attacker_x_m;  // default: ring_radius_m - 1
  std::optional<double> attacker_y_m;  // default: 0
  int target_cell = 0;

  Deployment build() const;
};

struct ExperimentConfig {
  std::vector<double> target_powers_dbm{-5.0, 0.0, 5.0, 10.0};
  double attacker_power_dbm = 20.0;
  std::size_t frames_per_point = 2000;
  std::size_t windows_per_point = 200;
  std::uint64_t master_seed = 1;
  DeploymentConfig deployment{};
  ChannelParams channel{};
  DetectorConfig detector{};
  FrameLayout frame{};
  std::vector<AttackCase> cases{AttackCase::NoAttack, AttackCase::Jamming,
                                AttackCase::Spoofing, AttackCase::BeaconSync,
                                AttackCase::RelayAF};
  // Detection threshold per power point: calibrated from benign windows when
  // true, otherwise the static detector.threshold is used as-is.
  bool threshold_auto = true;
  std::vector<double> roc_thresholds{0.0,  0.001, 0.002, 0.005, 0.01, 0.02,
                                     0.05, 0.1,   0.2,   0.5,   1.0,  2.0};

  void validate() const;  // throws std::invalid_argument
};

struct ResultRow {
  AttackCase case_id = AttackCase::NoAttack;
  double target_power_dbm = 0.0;
  double pl = 0.0;
  double header_ber = 0.0;
  double detection_rate = 0.0;
  double false_alarm_rate = 0.0;
  double mean_kl = 0.0;
  std::size_t n_frames = 0;
};

struct RocRow {
  AttackCase case_id = AttackCase::NoAttack;
  double threshold = 0.0;
  double detection_rate = 0.0;
  double false_alarm_rate = 0.0;
};

// Per-point detection context: baseline detector, the calibrated threshold
// and the benign reference windows shared by every case at that power.
struct PointContext {
  double target_power_dbm = 0.0;
  KlDetector detector;
  double threshold = 0.0;
  std::vector<double> calibration_kls;
  std::vector<double> benign_kls;
  double false_alarm_rate = 0.0;
};

PointContext make_point_context(const ExperimentConfig& config, double power_dbm);

// Monte-Carlo for one (case, power) point: per frame draw a true cell, build
// a frame, observe at the anchors, localize, demodulate the header at the
// serving anchor; windows of fresh frames feed the KL detector.
ResultRow run_case(AttackCase c, double power_dbm, const ExperimentConfig& config);
ResultRow run_case_at(AttackCase c, const ExperimentConfig& config,
                      const PointContext& ctx);

// Full factorial sweep over config.cases x config.target_powers_dbm.
std::vector<ResultRow> sweep(const ExperimentConfig& config);

// Detection/false-alarm rates per case over a pooled set of per-window KL
// values (one pool per case across all powers), evaluated at each threshold.
// Thresholds must be ascending and non-empty.
std::vector<RocRow> roc_sweep(const ExperimentConfig& config,
                              const std::vector<double>& thresholds);

// Localization and header-BER part of one (case, power) point, without the
// detection windows. Frames are seeded exactly as in run_case, so the PL and
// BER match the sweep's figures.
struct LocalizationStudy {
  double pl = 0.0;
  double attacker_cell_rate = 0.0;  // estimate equals the cell nearest the attacker
  double header_ber = 0.0;
  std::size_t n_frames = 0;
};
LocalizationStudy localization_study(AttackCase c, double power_dbm,
                                     const ExperimentConfig& config);

// Frame-level beacon/header power-gap flag rates at one power: a frame flags
// when at least detector.power_gap_quorum anchors show a gap above
// detector.power_gap_db. Used by the calibration report.
struct PowerGapRates {
  double beacon_sync_rate = 0.0;
  double benign_rate = 0.0;
  std::size_t n_frames = 0;
};
PowerGapRates power_gap_study(const ExperimentConfig& config, double power_dbm);

struct CaseKlStats {
  AttackCase case_id{};
  double kl_min = 0.0, kl_mean = 0.0, kl_max = 0.0;
  double detection_at_calibrated = 0.0;
  double detection_at_default = 0.0;
};

struct CalibrationReport {
  double target_power_dbm = 0.0;
  double calibrated_threshold = 0.0;
  double default_threshold = 0.0;
  double benign_min = 0.0, benign_mean = 0.0, benign_max = 0.0;
  double false_alarm_calibrated = 0.0;
  double false_alarm_default = 0.0;
  // min over attack cases of (attack KL min / benign KL max)
  double separation_margin = 0.0;
  std::vector<CaseKlStats> cases;
};

CalibrationReport calibrate_point(const ExperimentConfig& config, double power_dbm);
std::string format_report(const CalibrationReport& report);

// CSV serialization, 6 significant digits.
// sweep:  case,target_power_dbm,pl,header_ber,detection_rate,false_alarm_rate,mean_kl,n_frames
// roc:    case,threshold,detection_rate,false_alarm_rate
std::string results_to_csv(const std::vector<ResultRow>& rows);
std::string roc_to_csv(const std::vector<RocRow>& rows);

}  // namespace icls
