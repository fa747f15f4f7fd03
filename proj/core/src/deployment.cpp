#include "icls/deployment.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace icls {

double distance(const Position2D& a, const Position2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Deployment hex_deployment(double ring_radius_m, double candidate_offset_m) {
  if (ring_radius_m <= 0.0)
    throw std::invalid_argument("hex_deployment: ring radius must be positive");
  if (candidate_offset_m < 0.0 || candidate_offset_m >= ring_radius_m)
    throw std::invalid_argument(
        "hex_deployment: candidate offset must be in [0, ring radius)");

  Deployment d;
  const double cand_radius = ring_radius_m - candidate_offset_m;
  for (std::size_t k = 0; k < kNumCells; ++k) {
    const double angle = std::numbers::pi / 3.0 * static_cast<double>(k);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    d.anchors[k] = Position2D{ring_radius_m * c, ring_radius_m * s};
    d.candidates[k] = Position2D{cand_radius * c, cand_radius * s};
  }
  d.center = Position2D{0.0, 0.0};
  d.target_cell = 0;
  d.attacker_pos = Position2D{ring_radius_m - 1.0, 0.0};
  return d;
}

}  // namespace icls
