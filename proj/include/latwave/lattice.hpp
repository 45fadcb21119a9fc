#pragma once

// Geometry and equations of motion of the uniform triangular mass-spring
// lattice in natural units: unit mass, unit bond length, unit stiffness.
// Displacements are complex so a single computation carries amplitude and
// phase of time-harmonic motion; physical fields are the real parts.

#include <array>
#include <complex>

namespace latwave {

using complexd = std::complex<double>;

/// Integer coordinates (m, n) of a lattice mass.
struct NodeIndex {
  int m = 0;
  int n = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Cartesian position of a node; y is always an integer multiple of sqrt(3)/2.
struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// In-plane displacement (or velocity, or force amplitude) of one mass.
struct Displacement2 {
  complexd x{0.0, 0.0};
  complexd y{0.0, 0.0};

  Displacement2& operator+=(const Displacement2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend Displacement2 operator+(Displacement2 a, const Displacement2& b) { return a += b; }
  friend Displacement2 operator-(const Displacement2& a, const Displacement2& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend Displacement2 operator*(const complexd& s, const Displacement2& d) {
    return {s * d.x, s * d.y};
  }
  friend Displacement2 operator*(double s, const Displacement2& d) { return {s * d.x, s * d.y}; }
};

double norm2(const Displacement2& d); // |x|^2 + |y|^2

/// Axial spring forces Q0..Q5 exerted on a mass by its six neighbours,
/// in the fixed neighbour order of neighbor_offsets() below.
using BondForces = std::array<complexd, 6>;

/// Neighbour order is fixed throughout the project (and in file formats):
/// (m+1,n), (m,n+1), (m-1,n+1), (m-1,n), (m,n-1), (m+1,n-1).
const std::array<NodeIndex, 6>& neighbor_offsets();

/// Unit vector from a node towards neighbour j.
const std::array<Position, 6>& bond_directions();

/// Cartesian position of node (m, n): x = m + n/2, y = (sqrt(3)/2) n.
Position node_position(NodeIndex idx);

/// Axial force projections Q_j = (u_j - u_center) . e_j for the six bonds.
BondForces bond_forces(const Displacement2& center,
                       const std::array<Displacement2, 6>& neighbors);

/// Acceleration of a mass given its bond forces and an applied force P.
Displacement2 acceleration(const BondForces& q, const Displacement2& p);

} // namespace latwave
