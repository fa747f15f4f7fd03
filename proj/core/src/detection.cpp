#include "icls/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace icls {

ComponentStats partition_power_stats(const AnchorObservation& obs,
                                     const TxBits& tx_bits) {
  ComponentStats stats;
  stats.beacon_power_dbm = mean_power_dbm(obs.beacon());
  stats.header_power_dbm = mean_power_dbm(obs.header());
  stats.payload_power_dbm = mean_power_dbm(obs.payload());

  // Header BER after derotating with the beacon-LS channel estimate.
  Cplx gain = ls_gain_estimate(obs.beacon(), obs.beacon_ref);
  if (gain == Cplx{0.0, 0.0}) gain = Cplx{1.0, 0.0};
  CplxVec equalized(obs.header().begin(), obs.header().end());
  for (auto& s : equalized) s /= gain;
  const BitVector rx = demodulate(equalized, obs.layout.header_mod);
  stats.header_ber = bit_error_rate(tx_bits.header, rx);
  return stats;
}

bool power_gap_detect(const ComponentStats& stats, double gap_threshold_db) {
  return stats.beacon_power_dbm - stats.header_power_dbm > gap_threshold_db;
}

std::vector<double> envelope_observable(
    const std::vector<CplxVec>& beacon_partitions) {
  if (beacon_partitions.empty())
    throw std::invalid_argument("envelope_observable: empty window");
  std::vector<double> env;
  for (const auto& part : beacon_partitions) {
    if (part.empty())
      throw std::invalid_argument("envelope_observable: empty beacon partition");
    for (const auto& s : part) env.push_back(std::abs(s));
  }
  double mean = 0.0;
  for (double v : env) mean += v;
  mean /= static_cast<double>(env.size());
  if (mean <= 0.0)
    throw std::invalid_argument("envelope_observable: zero-energy window");
  for (double& v : env) v /= mean;
  return env;
}

Histogram empirical_histogram(const std::vector<double>& samples,
                              const HistogramLayout& layout) {
  if (samples.empty())
    throw std::invalid_argument("empirical_histogram: empty input");
  if (layout.bins == 0 || layout.hi <= layout.lo)
    throw std::invalid_argument("empirical_histogram: bad layout");

  std::vector<double> counts(layout.bins, 0.0);
  const double width = layout.bin_width();
  for (double v : samples) {
    std::size_t bin;
    if (v >= layout.hi) {
      bin = layout.bins - 1;  // overflow clamps into the last bin
    } else if (v < layout.lo) {
      bin = 0;
    } else {
      bin = static_cast<std::size_t>((v - layout.lo) / width);
      if (bin >= layout.bins) bin = layout.bins - 1;
    }
    counts[bin] += 1.0;
  }

  const double n = static_cast<double>(samples.size());
  Histogram h{layout, std::vector<double>(layout.bins)};
  // Floored bins stay exactly at the smoothing floor; the remaining mass is
  // rescaled so the total is one and no probability drops below the floor.
  double floored_mass = 0.0;
  double kept_mass = 0.0;
  for (std::size_t i = 0; i < layout.bins; ++i) {
    const double p = counts[i] / n;
    if (p <= layout.smoothing_floor) {
      h.probabilities[i] = layout.smoothing_floor;
      floored_mass += layout.smoothing_floor;
    } else {
      h.probabilities[i] = p;
      kept_mass += p;
    }
  }
  const double rescale = (1.0 - floored_mass) / kept_mass;
  for (double& p : h.probabilities)
    if (p > layout.smoothing_floor) p *= rescale;
  return h;
}

double kl_divergence(const Histogram& p, const Histogram& q) {
  if (!(p.layout == q.layout) ||
      p.probabilities.size() != q.probabilities.size())
    throw std::invalid_argument("kl_divergence: histogram layouts differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
    const double pi = p.probabilities[i];
    if (pi > 0.0) kl += pi * std::log(pi / q.probabilities[i]);
  }
  return kl;
}

KlDetector calibrate_baseline(const std::vector<CplxVec>& attack_free_frames,
                              const DetectorConfig& config) {
  if (attack_free_frames.size() < 10 * config.window_frames)
    throw std::invalid_argument(
        "calibrate_baseline: need at least 10 windows worth of attack-free frames");
  const auto env = envelope_observable(attack_free_frames);
  KlDetector det;
  det.baseline = empirical_histogram(env, config.layout);
  det.threshold = config.threshold;
  det.window_frames = config.window_frames;
  return det;
}

KlDecision kl_detect(const KlDetector& detector,
                     const std::vector<CplxVec>& window) {
  if (window.size() != detector.window_frames)
    throw std::invalid_argument("kl_detect: window size mismatch");
  const auto env = envelope_observable(window);
  const Histogram h = empirical_histogram(env, detector.baseline.layout);
  KlDecision d;
  d.kl = kl_divergence(h, detector.baseline);
  d.flagged = d.kl > detector.threshold;
  return d;
}

DetectionRates detection_rates(const std::vector<bool>& attack_flags,
                               const std::vector<bool>& benign_flags) {
  if (attack_flags.empty() || benign_flags.empty())
    throw std::invalid_argument("detection_rates: empty input");
  auto frac = [](const std::vector<bool>& flags) {
    std::size_t n = 0;
    for (bool f : flags)
      if (f) ++n;
    return static_cast<double>(n) / static_cast<double>(flags.size());
  };
  return DetectionRates{frac(attack_flags), frac(benign_flags)};
}

}  // namespace icls
