#pragma once

#include <array>
#include <cstddef>

namespace icls {

struct Position2D {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position2D& a, const Position2D& b);

inline constexpr std::size_t kNumCells = 6;

// Six anchors on a ring around a central calibration antenna, one candidate
// target position per cell, and the attacker position.
struct Deployment {
  std::array<Position2D, kNumCells> anchors{};
  std::array<Position2D, kNumCells> candidates{};
  Position2D center{};
  int target_cell = 0;
  Position2D attacker_pos{};
};

// Anchors at angles 60*k degrees on a circle of ring_radius_m around the
// origin. candidates[k] sits on the same bearing at ring_radius_m -
// candidate_offset_m (offset 0 co-locates targets with their anchors).
// Attacker defaults to 1 m inside anchor 0, at (ring_radius_m - 1, 0).
// Throws std::invalid_argument on a non-positive radius or an offset that
// is not smaller than the radius.
Deployment hex_deployment(double ring_radius_m, double candidate_offset_m = 0.0);

}  // namespace icls
