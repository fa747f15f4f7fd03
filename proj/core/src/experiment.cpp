#include "icls/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>

namespace icls {

namespace {

// Stream tag groups. Every simulated frame draws from one generator derived
// from (master_seed, group, case, power, frame index), so results do not
// depend on execution order or parallelism.
enum ExpGroup : std::uint64_t {
  kGroupMain = 1,        // localization / BER frames
  kGroupCalibBase = 2,   // baseline calibration frames
  kGroupCalibWin = 3,    // threshold calibration windows
  kGroupBenignWin = 4,   // benign reference windows
  kGroupCaseWin = 5,     // per-case detection windows
};

std::uint64_t power_key(double power_dbm) {
  return static_cast<std::uint64_t>(
      static_cast<std::int64_t>(std::llround(power_dbm * 1000.0)));
}

struct FrameSim {
  int true_cell = 0;
  TxBits tx_bits;
  std::array<AnchorObservation, kNumCells> obs;
};

FrameSim simulate_frame(AttackCase c, double power_dbm,
                        const ExperimentConfig& cfg, const Deployment& base_dep,
                        std::uint64_t group, std::uint64_t index) {
  const std::uint64_t ck = static_cast<std::uint64_t>(c);
  const std::uint64_t pk = power_key(power_dbm);
  Rng frame_rng = derive_rng(cfg.master_seed, {group, ck, pk, index});

  const ModulatedFrame frame =
      build_frame(tiled_beacon_pattern(cfg.frame.beacon_bits),
                  random_bits(cfg.frame.header_bits, frame_rng),
                  random_bits(cfg.frame.payload_bits, frame_rng), cfg.frame);

  std::uniform_int_distribution<int> cell_dist(0, kNumCells - 1);

  FrameSim sim;
  sim.true_cell = cell_dist(frame_rng);
  sim.tx_bits = frame.tx_bits;

  Deployment dep = base_dep;
  dep.target_cell = sim.true_cell;

  AttackScenario scenario;
  scenario.case_id = c;
  scenario.attacker_power_dbm = cfg.attacker_power_dbm;
  scenario.attacker_pos = base_dep.attacker_pos;

  sim.obs = observe_at_anchors(dep, frame, scenario, cfg.channel, power_dbm,
                               frame_rng);
  return sim;
}

// All six anchors' beacon slices of one frame, pooled into one partition for
// the window observable. Hexagonal symmetry keeps the pooled benign
// distribution independent of the true cell.
CplxVec pooled_beacon(const FrameSim& sim) {
  CplxVec out;
  out.reserve(kNumCells * sim.obs[0].layout.beacon_symbols());
  for (const auto& o : sim.obs) {
    const auto b = o.beacon();
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

std::vector<double> window_kls(AttackCase c, double power_dbm,
                               const ExperimentConfig& cfg,
                               const Deployment& dep, const KlDetector& det,
                               std::uint64_t group) {
  std::vector<double> kls;
  kls.reserve(cfg.windows_per_point);
  std::vector<CplxVec> window(cfg.detector.window_frames);
  for (std::uint64_t w = 0; w < cfg.windows_per_point; ++w) {
    for (std::uint64_t f = 0; f < cfg.detector.window_frames; ++f) {
      const std::uint64_t index = w * cfg.detector.window_frames + f;
      window[f] = pooled_beacon(simulate_frame(c, power_dbm, cfg, dep, group, index));
    }
    kls.push_back(kl_detect(det, window).kl);
  }
  return kls;
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double exceed_fraction(const std::vector<double>& kls, double threshold) {
  std::size_t n = 0;
  for (double k : kls)
    if (k > threshold) ++n;
  return kls.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(kls.size());
}

std::size_t header_errors(const AnchorObservation& obs, const TxBits& tx_bits) {
  const ComponentStats stats = partition_power_stats(obs, tx_bits);
  return static_cast<std::size_t>(
      std::llround(stats.header_ber * static_cast<double>(tx_bits.header.size())));
}

void append_csv_value(std::string& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  out += buf;
}

}  // namespace

Deployment DeploymentConfig::build() const {
  Deployment dep = hex_deployment(ring_radius_m, candidate_offset_m);
  if (attacker_x_m || attacker_y_m)
    dep.attacker_pos = Position2D{attacker_x_m.value_or(ring_radius_m - 1.0),
                                  attacker_y_m.value_or(0.0)};
  if (target_cell < 0 || target_cell >= static_cast<int>(kNumCells))
    throw std::invalid_argument("deployment: target_cell out of range");
  dep.target_cell = target_cell;
  return dep;
}

void ExperimentConfig::validate() const {
  channel.validate();
  frame.validate();
  deployment.build();
  if (target_powers_dbm.empty())
    throw std::invalid_argument("experiment: target_powers_dbm must not be empty");
  for (double p : target_powers_dbm)
    if (!std::isfinite(p))
      throw std::invalid_argument("experiment: target power must be finite");
  if (!std::isfinite(attacker_power_dbm))
    throw std::invalid_argument("experiment: attacker power must be finite");
  if (cases.empty())
    throw std::invalid_argument("experiment: cases must not be empty");
  if (frames_per_point < detector.window_frames)
    throw std::invalid_argument(
        "experiment: frames_per_point must be at least the detector window");
  if (windows_per_point == 0)
    throw std::invalid_argument("experiment: windows_per_point must be positive");
  if (detector.window_frames == 0)
    throw std::invalid_argument("detector: window_frames must be positive");
  if (detector.baseline_frames < 10 * detector.window_frames)
    throw std::invalid_argument(
        "detector: baseline_frames must be at least 10 windows");
  if (detector.layout.bins < 2)
    throw std::invalid_argument("detector: need at least 2 bins");
  if (detector.layout.hi <= detector.layout.lo)
    throw std::invalid_argument("detector: envelope_max must exceed the lower edge");
  if (detector.layout.smoothing_floor <= 0.0 ||
      detector.layout.smoothing_floor >= 1.0 / static_cast<double>(detector.layout.bins))
    throw std::invalid_argument("detector: smoothing_floor out of range");
  if (detector.threshold < 0.0)
    throw std::invalid_argument("detector: threshold must be non-negative");
  if (detector.power_gap_quorum < 1 ||
      detector.power_gap_quorum > static_cast<int>(kNumCells))
    throw std::invalid_argument("detector: power_gap_quorum must be 1..6");
}

PointContext make_point_context(const ExperimentConfig& cfg, double power_dbm) {
  const Deployment dep = cfg.deployment.build();

  PointContext ctx;
  ctx.target_power_dbm = power_dbm;

  std::vector<CplxVec> baseline_frames;
  baseline_frames.reserve(cfg.detector.baseline_frames);
  for (std::uint64_t f = 0; f < cfg.detector.baseline_frames; ++f)
    baseline_frames.push_back(pooled_beacon(simulate_frame(
        AttackCase::NoAttack, power_dbm, cfg, dep, kGroupCalibBase, f)));
  ctx.detector = calibrate_baseline(baseline_frames, cfg.detector);

  ctx.calibration_kls = window_kls(AttackCase::NoAttack, power_dbm, cfg, dep,
                                   ctx.detector, kGroupCalibWin);
  if (cfg.threshold_auto) {
    const double kmax =
        *std::max_element(ctx.calibration_kls.begin(), ctx.calibration_kls.end());
    ctx.threshold = kmax + 3.0 * stddev_of(ctx.calibration_kls);
  } else {
    ctx.threshold = cfg.detector.threshold;
  }
  ctx.detector.threshold = ctx.threshold;

  ctx.benign_kls = window_kls(AttackCase::NoAttack, power_dbm, cfg, dep,
                              ctx.detector, kGroupBenignWin);
  ctx.false_alarm_rate = exceed_fraction(ctx.benign_kls, ctx.threshold);
  return ctx;
}

LocalizationStudy localization_study(AttackCase c, double power_dbm,
                                     const ExperimentConfig& cfg) {
  cfg.validate();
  const Deployment dep = cfg.deployment.build();
  const FingerprintMap fp = expected_fingerprints(dep, cfg.channel, power_dbm);

  int attacker_cell = 0;
  for (std::size_t a = 1; a < kNumCells; ++a)
    if (distance(dep.attacker_pos, dep.anchors[a]) <
        distance(dep.attacker_pos, dep.anchors[attacker_cell]))
      attacker_cell = static_cast<int>(a);

  std::vector<std::pair<int, int>> trials;
  trials.reserve(cfg.frames_per_point);
  std::size_t bit_errors = 0;
  std::size_t bits_total = 0;
  std::size_t attacker_hits = 0;

  for (std::uint64_t f = 0; f < cfg.frames_per_point; ++f) {
    const FrameSim sim = simulate_frame(c, power_dbm, cfg, dep, kGroupMain, f);

    std::array<std::span<const Cplx>, kNumCells> beacons;
    for (std::size_t a = 0; a < kNumCells; ++a) beacons[a] = sim.obs[a].beacon();
    const LocalizationResult loc = grid_search_localize(beacon_rss(beacons), fp);
    trials.emplace_back(sim.true_cell, loc.cell_index);
    if (loc.cell_index == attacker_cell) ++attacker_hits;

    // The serving anchor (the true cell's) demodulates the header.
    bit_errors += header_errors(sim.obs[sim.true_cell], sim.tx_bits);
    bits_total += sim.tx_bits.header.size();
  }

  LocalizationStudy study;
  study.pl = probability_of_localization(trials);
  study.attacker_cell_rate =
      static_cast<double>(attacker_hits) / static_cast<double>(trials.size());
  study.header_ber =
      static_cast<double>(bit_errors) / static_cast<double>(bits_total);
  study.n_frames = cfg.frames_per_point;
  return study;
}

ResultRow run_case_at(AttackCase c, const ExperimentConfig& cfg,
                      const PointContext& ctx) {
  const double power_dbm = ctx.target_power_dbm;
  const Deployment dep = cfg.deployment.build();
  const LocalizationStudy study = localization_study(c, power_dbm, cfg);

  ResultRow row;
  row.case_id = c;
  row.target_power_dbm = power_dbm;
  row.pl = study.pl;
  row.header_ber = study.header_ber;
  row.n_frames = cfg.frames_per_point;
  row.false_alarm_rate = ctx.false_alarm_rate;

  if (c == AttackCase::NoAttack) {
    row.detection_rate = exceed_fraction(ctx.benign_kls, ctx.threshold);
    row.mean_kl = mean_of(ctx.benign_kls);
  } else {
    const std::vector<double> kls =
        window_kls(c, power_dbm, cfg, dep, ctx.detector, kGroupCaseWin);
    row.detection_rate = exceed_fraction(kls, ctx.threshold);
    row.mean_kl = mean_of(kls);
  }
  return row;
}

ResultRow run_case(AttackCase c, double power_dbm, const ExperimentConfig& cfg) {
  cfg.validate();
  return run_case_at(c, cfg, make_point_context(cfg, power_dbm));
}

std::vector<ResultRow> sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  // Power points are independent; every frame owns a stream derived from
  // (seed, group, case, power, index), so parallel execution is exact.
  std::vector<std::future<std::vector<ResultRow>>> points;
  points.reserve(cfg.target_powers_dbm.size());
  for (double power : cfg.target_powers_dbm)
    points.push_back(std::async(std::launch::async, [&cfg, power] {
      const PointContext ctx = make_point_context(cfg, power);
      std::vector<ResultRow> out;
      out.reserve(cfg.cases.size());
      for (AttackCase c : cfg.cases) out.push_back(run_case_at(c, cfg, ctx));
      return out;
    }));

  std::vector<ResultRow> rows;
  rows.reserve(cfg.cases.size() * cfg.target_powers_dbm.size());
  for (auto& fut : points) {
    const auto out = fut.get();
    rows.insert(rows.end(), out.begin(), out.end());
  }
  // Case-major order keeps one case's power sweep contiguous in the CSV.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) {
                     return static_cast<int>(a.case_id) < static_cast<int>(b.case_id);
                   });
  return rows;
}

std::vector<RocRow> roc_sweep(const ExperimentConfig& cfg,
                              const std::vector<double>& thresholds) {
  cfg.validate();
  if (thresholds.empty())
    throw std::invalid_argument("roc_sweep: thresholds must not be empty");
  if (!std::is_sorted(thresholds.begin(), thresholds.end()))
    throw std::invalid_argument("roc_sweep: thresholds must be ascending");

  const Deployment dep = cfg.deployment.build();

  // One pooled set of per-window KL values per case, shared by every
  // threshold. Windows reuse the sweep's stream tags, so the pools match
  // what sweep() evaluates.
  std::vector<std::vector<double>> pools(cfg.cases.size());
  std::vector<double> benign_pool;
  for (double power : cfg.target_powers_dbm) {
    const PointContext ctx = make_point_context(cfg, power);
    benign_pool.insert(benign_pool.end(), ctx.benign_kls.begin(),
                       ctx.benign_kls.end());
    for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
      if (cfg.cases[i] == AttackCase::NoAttack) {
        pools[i].insert(pools[i].end(), ctx.benign_kls.begin(),
                        ctx.benign_kls.end());
      } else {
        const auto kls = window_kls(cfg.cases[i], power, cfg, dep, ctx.detector,
                                    kGroupCaseWin);
        pools[i].insert(pools[i].end(), kls.begin(), kls.end());
      }
    }
  }

  std::vector<RocRow> rows;
  rows.reserve(cfg.cases.size() * thresholds.size());
  for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
    for (double thr : thresholds) {
      RocRow r;
      r.case_id = cfg.cases[i];
      r.threshold = thr;
      r.detection_rate = exceed_fraction(pools[i], thr);
      r.false_alarm_rate = exceed_fraction(benign_pool, thr);
      rows.push_back(r);
    }
  }
  return rows;
}

PowerGapRates power_gap_study(const ExperimentConfig& cfg, double power_dbm) {
  cfg.validate();
  const Deployment dep = cfg.deployment.build();

  const double audible_dbm =
      cfg.channel.noise_power_dbm + cfg.detector.power_gap_min_level_db;
  auto flag_rate = [&](AttackCase c) {
    std::size_t flagged = 0;
    for (std::uint64_t f = 0; f < cfg.frames_per_point; ++f) {
      const FrameSim sim = simulate_frame(c, power_dbm, cfg, dep, kGroupMain, f);
      int votes = 0;
      for (const auto& o : sim.obs) {
        const ComponentStats stats = partition_power_stats(o, sim.tx_bits);
        const bool audible =
            std::max(stats.beacon_power_dbm, stats.header_power_dbm) > audible_dbm;
        if (audible && power_gap_detect(stats, cfg.detector.power_gap_db))
          ++votes;
      }
      if (votes >= cfg.detector.power_gap_quorum) ++flagged;
    }
    return static_cast<double>(flagged) / static_cast<double>(cfg.frames_per_point);
  };

  PowerGapRates rates;
  rates.beacon_sync_rate = flag_rate(AttackCase::BeaconSync);
  rates.benign_rate = flag_rate(AttackCase::NoAttack);
  rates.n_frames = cfg.frames_per_point;
  return rates;
}

CalibrationReport calibrate_point(const ExperimentConfig& cfg, double power_dbm) {
  cfg.validate();
  const Deployment dep = cfg.deployment.build();
  const PointContext ctx = make_point_context(cfg, power_dbm);

  CalibrationReport rep;
  rep.target_power_dbm = power_dbm;
  rep.calibrated_threshold = ctx.threshold;
  rep.default_threshold = cfg.detector.threshold;
  rep.benign_min = *std::min_element(ctx.benign_kls.begin(), ctx.benign_kls.end());
  rep.benign_mean = mean_of(ctx.benign_kls);
  rep.benign_max = *std::max_element(ctx.benign_kls.begin(), ctx.benign_kls.end());
  rep.false_alarm_calibrated = exceed_fraction(ctx.benign_kls, ctx.threshold);
  rep.false_alarm_default = exceed_fraction(ctx.benign_kls, rep.default_threshold);

  const double benign_ceiling =
      std::max(rep.benign_max, *std::max_element(ctx.calibration_kls.begin(),
                                                 ctx.calibration_kls.end()));
  rep.separation_margin = 0.0;
  bool first = true;
  for (AttackCase c : cfg.cases) {
    if (c == AttackCase::NoAttack) continue;
    const auto kls = window_kls(c, power_dbm, cfg, dep, ctx.detector, kGroupCaseWin);
    CaseKlStats s;
    s.case_id = c;
    s.kl_min = *std::min_element(kls.begin(), kls.end());
    s.kl_mean = mean_of(kls);
    s.kl_max = *std::max_element(kls.begin(), kls.end());
    s.detection_at_calibrated = exceed_fraction(kls, ctx.threshold);
    s.detection_at_default = exceed_fraction(kls, rep.default_threshold);
    rep.cases.push_back(s);
    const double margin = s.kl_min / benign_ceiling;
    if (first || margin < rep.separation_margin) rep.separation_margin = margin;
    first = false;
  }
  return rep;
}

std::string format_report(const CalibrationReport& rep) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "target power %.6g dBm\n"
                "  calibrated threshold: %.6g nats (benign windows: min %.6g  "
                "mean %.6g  max %.6g)\n"
                "  false alarm rate: %.6g calibrated, %.6g at default "
                "threshold %.6g\n",
                rep.target_power_dbm, rep.calibrated_threshold, rep.benign_min,
                rep.benign_mean, rep.benign_max, rep.false_alarm_calibrated,
                rep.false_alarm_default, rep.default_threshold);
  out += buf;
  for (const auto& s : rep.cases) {
    std::snprintf(buf, sizeof(buf),
                  "  %-12s KL min %.6g  mean %.6g  max %.6g  detection %.6g "
                  "(calibrated) %.6g (default)\n",
                  std::string(case_name(s.case_id)).c_str(), s.kl_min, s.kl_mean,
                  s.kl_max, s.detection_at_calibrated, s.detection_at_default);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "  separation margin (min attack KL / max benign KL): %.6g\n",
                rep.separation_margin);
  out += buf;
  return out;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "case,target_power_dbm,pl,header_ber,detection_rate,false_alarm_rate,"
      "mean_kl,n_frames\n";
  for (const auto& r : rows) {
    out += case_name(r.case_id);
    out += ',';
    append_csv_value(out, r.target_power_dbm);
    out += ',';
    append_csv_value(out, r.pl);
    out += ',';
    append_csv_value(out, r.header_ber);
    out += ',';
    append_csv_value(out, r.detection_rate);
    out += ',';
    append_csv_value(out, r.false_alarm_rate);
    out += ',';
    append_csv_value(out, r.mean_kl);
    out += ',';
    out += std::to_string(r.n_frames);
    out += '\n';
  }
  return out;
}

std::string roc_to_csv(const std::vector<RocRow>& rows) {
  std::string out = "case,threshold,detection_rate,false_alarm_rate\n";
  for (const auto& r : rows) {
    out += case_name(r.case_id);
    out += ',';
    append_csv_value(out, r.threshold);
    out += ',';
    append_csv_value(out, r.detection_rate);
    out += ',';
    append_csv_value(out, r.false_alarm_rate);
    out += '\n';
  }
  return out;
}

}  // namespace icls
