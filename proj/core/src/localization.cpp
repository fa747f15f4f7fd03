#include "icls/localization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace icls {

RssVector beacon_rss(
    const std::array<std::span<const Cplx>, kNumCells>& beacon_per_anchor) {
  RssVector rss{};
  for (std::size_t a = 0; a < kNumCells; ++a) {
    if (beacon_per_anchor[a].empty())
      throw std::invalid_argument("beacon_rss: empty beacon slice");
    rss[a] = mean_power_dbm(beacon_per_anchor[a]);
  }
  return rss;
}

FingerprintMap expected_fingerprints(const Deployment& deployment,
                                     const ChannelParams& params,
                                     double tx_power_dbm) {
  FingerprintMap map;
  map.entries.reserve(kNumCells);
  for (std::size_t c = 0; c < kNumCells; ++c) {
    FingerprintEntry e;
    e.position = deployment.candidates[c];
    for (std::size_t a = 0; a < kNumCells; ++a) {
      const double d = distance(deployment.candidates[c], deployment.anchors[a]);
      e.rss[a] = tx_power_dbm - path_loss_db(d, params);
    }
    map.entries.push_back(e);
  }
  return map;
}

namespace {

double rss_distance_sq(const RssVector& a, const RssVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < kNumCells; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

LocalizationResult grid_search_localize(const RssVector& measured,
                                        const FingerprintMap& map) {
  if (map.entries.size() != kNumCells)
    throw std::invalid_argument("grid_search_localize: map must hold 6 candidate cells");
  LocalizationResult result;
  for (std::size_t c = 0; c < kNumCells; ++c)
    result.score_per_cell[c] = rss_distance_sq(measured, map.entries[c].rss);
  // Strict less keeps the lowest index on ties.
  result.cell_index = 0;
  for (std::size_t c = 1; c < kNumCells; ++c)
    if (result.score_per_cell[c] < result.score_per_cell[result.cell_index])
      result.cell_index = static_cast<int>(c);
  return result;
}

double rss_to_range(double rx_power_dbm, double tx_power_dbm,
                    const ChannelParams& params) {
  const double exponent_db =
      (tx_power_dbm - rx_power_dbm - params.reference_loss_db) /
      (10.0 * params.path_loss_exponent);
  return params.reference_distance_m * std::pow(10.0, exponent_db);
}

Position2D trilaterate(const std::vector<Position2D>& anchors,
                       const std::vector<double>& ranges_m) {
  if (anchors.size() < 3)
    throw std::invalid_argument("trilaterate: need at least 3 anchors");
  if (anchors.size() != ranges_m.size())
    throw std::invalid_argument("trilaterate: anchors/ranges size mismatch");

  // Expanding |p - a_i|^2 = r_i^2 and subtracting the mean equation removes
  // the quadratic term and spreads range noise evenly over the rows:
  //   2 (a_i - mean(a)) . p = (|a_i|^2 - r_i^2) - mean(|a|^2 - r^2)
  // Solve the normal equations of that linear system.
  const std::size_t m = anchors.size();
  double mx = 0.0, my = 0.0, mc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += anchors[i].x;
    my += anchors[i].y;
    mc += anchors[i].x * anchors[i].x + anchors[i].y * anchors[i].y -
          ranges_m[i] * ranges_m[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  mc /= static_cast<double>(m);

  double sxx = 0.0, sxy = 0.0, syy = 0.0, bx = 0.0, by = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double ax = 2.0 * (anchors[i].x - mx);
    const double ay = 2.0 * (anchors[i].y - my);
    const double rhs = anchors[i].x * anchors[i].x +
                       anchors[i].y * anchors[i].y -
                       ranges_m[i] * ranges_m[i] - mc;
    sxx += ax * ax;
    sxy += ax * ay;
    syy += ay * ay;
    bx += ax * rhs;
    by += ay * rhs;
  }
  const double det = sxx * syy - sxy * sxy;
  const double scale = sxx + syy;
  if (scale <= 0.0 || det <= 1e-12 * scale * scale)
    throw SingularGeometry("trilaterate: collinear anchors, system is singular");
  return Position2D{(syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det};
}

Position2D knn_fingerprint(const RssVector& measured, const FingerprintMap& map,
                           std::size_t k, bool weighted) {
  if (map.entries.empty())
    throw std::invalid_argument("knn_fingerprint: empty map");
  if (k < 1 || k > map.entries.size())
    throw std::invalid_argument("knn_fingerprint: k out of range");

  std::vector<std::size_t> order(map.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist_db(map.entries.size());
  for (std::size_t i = 0; i < map.entries.size(); ++i)
    dist_db[i] = std::sqrt(rss_distance_sq(measured, map.entries[i].rss));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist_db[a] < dist_db[b];
  });

  if (dist_db[order[0]] == 0.0) return map.entries[order[0]].position;

  double wsum = 0.0;
  Position2D out{0.0, 0.0};
  for (std::size_t j = 0; j < k; ++j) {
    const auto& e = map.entries[order[j]];
    const double w = weighted ? 1.0 / dist_db[order[j]] : 1.0;
    out.x += w * e.position.x;
    out.y += w * e.position.y;
    wsum += w;
  }
  out.x /= wsum;
  out.y /= wsum;
  return out;
}

double probability_of_localization(
    const std::vector<std::pair<int, int>>& trials) {
  if (trials.empty())
    throw std::invalid_argument("probability_of_localization: empty input");
  std::size_t correct = 0;
  for (const auto& [truth, estimate] : trials)
    if (truth == estimate) ++correct;
  return static_cast<double>(correct) / static_cast<double>(trials.size());
}

std::string fingerprints_to_csv(const FingerprintMap& map) {
  std::string out = "cell,x,y,rss_0,rss_1,rss_2,rss_3,rss_4,rss_5\n";
  char buf[64];
  for (std::size_t c = 0; c < map.entries.size(); ++c) {
    const auto& e = map.entries[c];
    out += std::to_string(c);
    std::snprintf(buf, sizeof(buf), ",%.6g,%.6g", e.position.x, e.position.y);
    out += buf;
    for (double v : e.rss) {
      std::snprintf(buf, sizeof(buf), ",%.6g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

FingerprintMap fingerprints_from_csv(const std::string& text) {
  FingerprintMap map;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {  // header row
      first = false;
      continue;
    }
    std::istringstream row(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(row, field, ',')) values.push_back(std::stod(field));
    if (values.size() != 3 + kNumCells)
      throw std::invalid_argument("fingerprints_from_csv: malformed row");
    FingerprintEntry e;
    e.position = Position2D{values[1], values[2]};
    for (std::size_t a = 0; a < kNumCells; ++a) e.rss[a] = values[3 + a];
    map.entries.push_back(e);
  }
  if (map.entries.empty())
    throw std::invalid_argument("fingerprints_from_csv: no entries");
  return map;
}

}  // namespace icls
