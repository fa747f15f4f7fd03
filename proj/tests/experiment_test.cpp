#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "icls/experiment.hpp"

using namespace icls;

namespace {

// Small but statistically meaningful configuration for unit-test runtimes.
ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.frames_per_point = 500;
  cfg.windows_per_point = 20;
  cfg.detector.window_frames = 40;
  cfg.detector.baseline_frames = 400;
  cfg.target_powers_dbm = {-5.0, 10.0};
  return cfg;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config validation catches cross-field violations") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 10;  // below the detector window
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_config();
  cfg.target_powers_dbm.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_config();
  cfg.detector.baseline_frames = cfg.detector.window_frames * 9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_config();
  cfg.detector.power_gap_quorum = 7;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_config();
  cfg.deployment.candidate_offset_m = 99.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("sweep covers the factorial grid") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 100;
  cfg.windows_per_point = 2;
  const auto rows = sweep(cfg);
  CHECK(rows.size() == cfg.cases.size() * cfg.target_powers_dbm.size());
  // One row per (case, power).
  for (AttackCase c : cfg.cases)
    for (double p : cfg.target_powers_dbm)
      CHECK(std::count_if(rows.begin(), rows.end(), [&](const ResultRow& r) {
              return r.case_id == c && r.target_power_dbm == p;
            }) == 1);
}

TEST_CASE("identical seeds give byte-identical CSV output") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 120;
  cfg.windows_per_point = 3;
  const std::string a = results_to_csv(sweep(cfg));
  const std::string b = results_to_csv(sweep(cfg));
  CHECK(a == b);

  cfg.master_seed = 2;
  const std::string c = results_to_csv(sweep(cfg));
  CHECK(a != c);
}

TEST_CASE("run_case matches the sweep row") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 150;
  cfg.windows_per_point = 2;
  cfg.target_powers_dbm = {0.0};
  cfg.cases = {AttackCase::RelayAF};
  const auto rows = sweep(cfg);
  const ResultRow direct = run_case(AttackCase::RelayAF, 0.0, cfg);
  CHECK(rows.size() == 1);
  CHECK(rows[0].pl == direct.pl);
  CHECK(rows[0].header_ber == direct.header_ber);
  CHECK(rows[0].detection_rate == direct.detection_rate);
  CHECK(rows[0].mean_kl == direct.mean_kl);
}

TEST_CASE("localization study agrees with the result rows") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 200;
  const auto study = localization_study(AttackCase::Jamming, -5.0, cfg);
  const ResultRow row = run_case(AttackCase::Jamming, -5.0, cfg);
  CHECK(study.pl == row.pl);
  CHECK(study.header_ber == row.header_ber);
}

TEST_CASE("jamming degrades the header at every power") {
  ExperimentConfig cfg = small_config();
  for (double p : cfg.target_powers_dbm) {
    const double jam = localization_study(AttackCase::Jamming, p, cfg).header_ber;
    const double clean = localization_study(AttackCase::NoAttack, p, cfg).header_ber;
    CHECK(jam > clean);
  }
}

TEST_CASE("relaying leaves the header unaffected") {
  ExperimentConfig cfg = small_config();
  for (double p : cfg.target_powers_dbm) {
    const double relay = localization_study(AttackCase::RelayAF, p, cfg).header_ber;
    const double clean = localization_study(AttackCase::NoAttack, p, cfg).header_ber;
    CHECK(std::abs(relay - clean) <= 0.02);
  }
}

TEST_CASE("no-attack localization does not degrade with power") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 1500;
  double prev = 0.0;
  for (double p : {-5.0, 0.0, 5.0, 10.0}) {
    const double pl = localization_study(AttackCase::NoAttack, p, cfg).pl;
    CHECK(pl >= prev - 0.01);  // non-decreasing within 1 pp slack
    prev = pl;
  }
}

TEST_CASE("benign localization beats 95% on the shipped defaults") {
  const ExperimentConfig cfg;  // full defaults, 2000 frames
  CHECK(localization_study(AttackCase::NoAttack, 10.0, cfg).pl >= 0.95);
}

TEST_CASE("detection power grows with the window length") {
  ExperimentConfig cfg = small_config();
  cfg.windows_per_point = 40;
  double prev = -1.0;
  for (std::size_t wf : {25u, 50u, 100u, 200u}) {
    cfg.detector.window_frames = wf;
    cfg.detector.baseline_frames = 10 * wf;
    cfg.frames_per_point = std::max<std::size_t>(cfg.frames_per_point, wf);
    const PointContext ctx = make_point_context(cfg, 0.0);
    const ResultRow row = run_case_at(AttackCase::RelayAF, cfg, ctx);
    CHECK(row.detection_rate >= prev - 0.01);
    prev = row.detection_rate;
  }
  CHECK(prev == 1.0);  // the default-size window must reach full detection
}

TEST_CASE("power gap study separates beacon-sync from benign traffic") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 400;
  const PowerGapRates rates = power_gap_study(cfg, 0.0);
  CHECK(rates.beacon_sync_rate > 0.95);
  CHECK(rates.benign_rate < 0.05);
}

TEST_CASE("roc endpoints and monotonicity") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 80;
  cfg.windows_per_point = 10;
  cfg.detector.window_frames = 30;
  cfg.detector.baseline_frames = 300;
  cfg.target_powers_dbm = {0.0};
  cfg.cases = {AttackCase::NoAttack, AttackCase::RelayAF};

  const std::vector<double> thresholds{0.0, 0.02, 0.1, 1e9};
  const auto rows = roc_sweep(cfg, thresholds);
  CHECK(rows.size() == cfg.cases.size() * thresholds.size());

  for (AttackCase c : cfg.cases) {
    double prev_det = 2.0, prev_fa = 2.0;
    for (const auto& r : rows) {
      if (r.case_id != c) continue;
      if (r.threshold == 0.0) {
        CHECK(r.detection_rate == 1.0);  // every positive KL flags
        CHECK(r.false_alarm_rate == 1.0);
      }
      if (r.threshold == 1e9) {
        CHECK(r.detection_rate == 0.0);
        CHECK(r.false_alarm_rate == 0.0);
      }
      CHECK(r.detection_rate <= prev_det);
      CHECK(r.false_alarm_rate <= prev_fa);
      prev_det = r.detection_rate;
      prev_fa = r.false_alarm_rate;
    }
  }

  CHECK_THROWS_AS(roc_sweep(cfg, {}), std::invalid_argument);
  CHECK_THROWS_AS(roc_sweep(cfg, {0.1, 0.05}), std::invalid_argument);
}

TEST_CASE("calibration report shows a usable separation margin") {
  ExperimentConfig cfg = small_config();
  cfg.frames_per_point = 100;
  cfg.windows_per_point = 15;
  cfg.cases = {AttackCase::NoAttack, AttackCase::BeaconSync, AttackCase::RelayAF};
  const CalibrationReport rep = calibrate_point(cfg, 0.0);
  CHECK(rep.separation_margin > 1.0);
  CHECK(rep.false_alarm_calibrated <= 0.05);
  CHECK(rep.cases.size() == 2);
  for (const auto& s : rep.cases) CHECK(s.detection_at_calibrated == 1.0);
  const std::string text = format_report(rep);
  CHECK(text.find("separation margin") != std::string::npos);
}

TEST_CASE("csv formats") {
  ResultRow r;
  r.case_id = AttackCase::RelayAF;
  r.target_power_dbm = -5.0;
  r.pl = 0.1234567;
  r.header_ber = 0.00012345;
  r.detection_rate = 1.0;
  r.false_alarm_rate = 0.0;
  r.mean_kl = 0.2345678;
  r.n_frames = 2000;
  const std::string csv = results_to_csv({r});
  CHECK(csv.find("case,target_power_dbm,pl,header_ber,detection_rate,"
                 "false_alarm_rate,mean_kl,n_frames\n") == 0);
  CHECK(csv.find("relay_af,-5,0.123457,0.00012345,1,0,0.234568,2000\n") !=
        std::string::npos);

  RocRow rr;
  rr.case_id = AttackCase::BeaconSync;
  rr.threshold = 0.008;
  rr.detection_rate = 1.0;
  rr.false_alarm_rate = 0.015;
  const std::string roc = roc_to_csv({rr});
  CHECK(roc.find("case,threshold,detection_rate,false_alarm_rate\n") == 0);
  CHECK(roc.find("beacon_sync,0.008,1,0.015\n") != std::string::npos);
}

}  // TEST_SUITE
