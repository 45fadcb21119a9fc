#include "latwave/lattice.hpp"

#include <cmath>
#include <numbers>

namespace latwave {

namespace {
constexpr double kHalf = 0.5;
const double kRoot3Half = std::numbers::sqrt3 / 2.0;
} // namespace

double norm2(const Displacement2& d) { return std::norm(d.x) + std::norm(d.y); }

const std::array<NodeIndex, 6>& neighbor_offsets() {
  static const std::array<NodeIndex, 6> offsets = {
      NodeIndex{1, 0},  NodeIndex{0, 1},  NodeIndex{-1, 1},
      NodeIndex{-1, 0}, NodeIndex{0, -1}, NodeIndex{1, -1}};
  return offsets;
}

const std::array<Position, 6>& bond_directions() {
  static const std::array<Position, 6> dirs = {
      Position{1.0, 0.0},    Position{kHalf, kRoot3Half},  Position{-kHalf, kRoot3Half},
      Position{-1.0, 0.0},   Position{-kHalf, -kRoot3Half}, Position{kHalf, -kRoot3Half}};
  return dirs;
}

Position node_position(NodeIndex idx) {
  return {idx.m + 0.5 * idx.n, kRoot3Half * idx.n};
}

BondForces bond_forces(const Displacement2& center,
                       const std::array<Displacement2, 6>& neighbors) {
  BondForces q;
  const auto& dirs = bond_directions();
  for (int j = 0; j < 6; ++j) {
    const Displacement2 rel = neighbors[static_cast<std::size_t>(j)] - center;
    q[static_cast<std::size_t>(j)] = dirs[static_cast<std::size_t>(j)].x * rel.x +
                                     dirs[static_cast<std::size_t>(j)].y * rel.y;
  }
  return q;
}

Displacement2 acceleration(const BondForces& q, const Displacement2& p) {
  // Vector sum of the axial forces projected back onto the bond directions:
  //   ax = Q0 - Q3 + (Q1 - Q2 - Q4 + Q5)/2
  //   ay = (Q1 + Q2 - Q4 - Q5) * sqrt(3)/2
  Displacement2 acc;
  acc.x = q[0] - q[3] + kHalf * (q[1] - q[2] - q[4] + q[5]) + p.x;
  acc.y = kRoot3Half * (q[1] + q[2] - q[4] - q[5]) + p.y;
  return acc;
}

} // namespace latwave
