#pragma once

#include <cstddef>
#include <vector>

#include "icls/attack.hpp"

namespace icls {

// Per-frame, per-anchor partition statistics.
struct ComponentStats {
  double beacon_power_dbm = 0.0;
  double header_power_dbm = 0.0;
  double payload_power_dbm = 0.0;
  double header_ber = 0.0;
};

struct HistogramLayout {
  std::size_t bins = 32;
  double lo = 0.0;
  double hi = 4.0;  // mean-normalized envelope range; overflow clamps to the last bin
  double smoothing_floor = 1e-9;

  bool operator==(const HistogramLayout&) const = default;
  double bin_width() const { return (hi - lo) / static_cast<double>(bins); }
};

struct Histogram {
  HistogramLayout layout;
  std::vector<double> probabilities;
};

// Mean |sample|^2 per partition in dBm plus the header BER after beacon-LS
// equalization against the known transmitted bits.
ComponentStats partition_power_stats(const AnchorObservation& obs,
                                     const TxBits& tx_bits);

// Beacon power above header power by strictly more than the threshold.
bool power_gap_detect(const ComponentStats& stats, double gap_threshold_db = 3.0);

// Per-sample envelope of all beacon samples in the window, divided by the
// window mean envelope so the statistic is scale invariant. One element per
// beacon sample. Throws on an empty or zero-energy window.
std::vector<double> envelope_observable(const std::vector<CplxVec>& beacon_partitions);

// Counts binned over [lo, hi) with overflow clamped into the last bin, then
// normalized with the floored bins held exactly at smoothing_floor and the
// rest rescaled so the mass sums to one.
Histogram empirical_histogram(const std::vector<double>& samples,
                              const HistogramLayout& layout = {});

// Kullback-Leibler divergence sum p*ln(p/q) in nats. Layouts must match.
double kl_divergence(const Histogram& p, const Histogram& q);

struct DetectorConfig {
  HistogramLayout layout{};
  double threshold = 0.008;  // nats
  std::size_t window_frames = 100;
  std::size_t baseline_frames = 1000;
  double power_gap_db = 3.0;
  int power_gap_quorum = 2;  // anchors that must flag before a frame flags
  // An anchor's gap vote only counts when its strongest partition sits this
  // far above the noise floor; deep-faded anchors otherwise compare two
  // noise estimates and fire spuriously.
  double power_gap_min_level_db = 6.0;
};

struct KlDetector {
  Histogram baseline;
  double threshold = 0.008;
  std::size_t window_frames = 100;
};

// Builds the attack-free baseline histogram from the envelope observable.
// Needs at least 10 windows worth of frames.
KlDetector calibrate_baseline(const std::vector<CplxVec>& attack_free_frames,
                              const DetectorConfig& config);

struct KlDecision {
  double kl = 0.0;
  bool flagged = false;
};

// KL of the window's envelope histogram against the baseline; flags when the
// value exceeds the threshold. The window must hold exactly window_frames
// beacon partitions.
KlDecision kl_detect(const KlDetector& detector,
                     const std::vector<CplxVec>& window);

struct DetectionRates {
  double detection_rate = 0.0;
  double false_alarm_rate = 0.0;
};

DetectionRates detection_rates(const std::vector<bool>& attack_flags,
                               const std::vector<bool>& benign_flags);

}  // namespace icls
