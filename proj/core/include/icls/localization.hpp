#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "icls/channel.hpp"
#include "icls/deployment.hpp"

namespace icls {

// Received signal strength per anchor, dBm, ordered by anchor index.
using RssVector = std::array<double, kNumCells>;

struct FingerprintEntry {
  Position2D position;
  RssVector rss{};
};

struct FingerprintMap {
  std::vector<FingerprintEntry> entries;
};

struct LocalizationResult {
  int cell_index = 0;
  std::array<double, kNumCells> score_per_cell{};  // lower is better
};

// Mean |sample|^2 of each anchor's beacon, in dBm. Throws if any anchor has
// an empty beacon slice.
RssVector beacon_rss(const std::array<std::span<const Cplx>, kNumCells>& beacon_per_anchor);

// Model-generated map: for each candidate cell the shadowing/fading-free
// expected RSS tx - PL(d) at all six anchors.
FingerprintMap expected_fingerprints(const Deployment& deployment,
                                     const ChannelParams& params,
                                     double tx_power_dbm);

// Cell minimizing the Euclidean distance in dB between measured and expected
// vectors; ties resolve to the lowest index. The map must hold exactly six
// entries ordered by cell.
LocalizationResult grid_search_localize(const RssVector& measured,
                                        const FingerprintMap& map);

// Inverts the log-distance model: d0 * 10^((tx - rx - L0)/(10 n)).
double rss_to_range(double rx_power_dbm, double tx_power_dbm,
                    const ChannelParams& params);

struct SingularGeometry : std::runtime_error {
  explicit SingularGeometry(const std::string& what) : std::runtime_error(what) {}
};

// Linear least squares on the linearized circle system. Needs at least three
// anchors; collinear anchors raise SingularGeometry.
Position2D trilaterate(const std::vector<Position2D>& anchors,
                       const std::vector<double>& ranges_m);

// Mean (or inverse-distance weighted mean) of the k nearest map entries in
// dB space. An exact match returns that entry's position.
Position2D knn_fingerprint(const RssVector& measured, const FingerprintMap& map,
                           std::size_t k, bool weighted);

// Fraction of (true_cell, estimated_cell) pairs that agree. Throws on empty.
double probability_of_localization(const std::vector<std::pair<int, int>>& trials);

// CSV schema: cell,x,y,rss_0..rss_5 (one row per entry).
std::string fingerprints_to_csv(const FingerprintMap& map);
FingerprintMap fingerprints_from_csv(const std::string& text);

}  // namespace icls
