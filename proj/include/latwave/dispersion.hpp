#pragma once

// Closed-form Floquet-Bloch analysis of the triangular lattice: the two
// dispersion surfaces, the 2x2 compliance numerator B and determinant of the
// harmonic operator, isofrequency contours, and the non-resonant lattice
// Green's function by Brillouin-cell quadrature.

#include <vector>

#include "latwave/lattice.hpp"

namespace latwave {

/// Wave vector in reciprocal space. All functions of k are periodic with
/// periods (4*pi, 4*pi/sqrt(3)); the canonical cell is the rectangle
/// kx in [-2*pi, 2*pi], ky in [-2*pi/sqrt(3), 2*pi/sqrt(3)].
struct WaveVector {
  double kx = 0.0;
  double ky = 0.0;
};

double cell_kx_max(); // 2*pi
double cell_ky_max(); // 2*pi/sqrt(3)

/// Canonical representative with kx in [-2pi, 2pi), ky in [-2pi/rt3, 2pi/rt3).
WaveVector wrap_to_cell(WaveVector k);

/// Half-trace F and discriminant radicand S of the dynamic matrix;
/// the squared branch frequencies are F +- sqrt(S), and S >= 0 everywhere.
struct DispersionParts {
  double f = 0.0;
  double s = 0.0;
};
DispersionParts dispersion_parts(WaveVector k);

/// Squared and radian frequencies of both branches at one wave vector,
/// ordered omega1 >= omega2 (upper branch first).
struct BranchFrequencies {
  double Omega1 = 0.0;
  double Omega2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};
BranchFrequencies branch_frequencies(WaveVector k);

/// Radian frequency of one branch (1 = upper, 2 = lower).
double branch_omega(int branch, WaveVector k);
/// Squared frequency of one branch.
double branch_Omega(int branch, WaveVector k);

/// Symmetric 2x2 dynamic matrix of the lattice in Fourier space.
struct DynamicMatrix {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;
};
DynamicMatrix dynamic_matrix(WaveVector k);

/// Numerator B of the compliance tensor A = B / Delta; the adjugate of the
/// harmonic operator, so bxx*byy - bxy^2 == Delta(Omega, k) identically.
struct ComplianceNumerator {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  Displacement2 apply(const Displacement2& p) const {
    return {xx * p.x + xy * p.y, xy * p.x + yy * p.y};
  }
  double det() const { return xx * yy - xy * xy; }
};
ComplianceNumerator compliance_numerator(double Omega, WaveVector k);

/// Determinant Delta(Omega, k) = (Omega - Omega1)(Omega - Omega2).
double dispersion_determinant(double Omega, WaveVector k);

/// Real polarization vector of a free wave on the given branch; null vector
/// of the harmonic operator at (branch_Omega(branch,k), k). Unit length.
Displacement2 branch_polarization(int branch, WaveVector k);

/// Uniform row-major sampling of one dispersion surface over the canonical
/// cell, endpoints included; row index runs over ky.
struct SurfaceGrid {
  int branch = 1;
  int resolution = 0;
  std::vector<double> omega; // resolution*resolution values, row-major

  double kx_at(int ix) const;
  double ky_at(int iy) const;
  double at(int ix, int iy) const { return omega[static_cast<std::size_t>(iy) * resolution + ix]; }
};
SurfaceGrid sample_surface(int branch, int resolution, bool parallel = true);

/// Level set omega_branch(k) = omega extracted by marching squares with
/// linear edge interpolation. `tolerance` is the measured worst-case
/// |omega(vertex) - omega| over all emitted vertices.
struct IsoContour {
  int branch = 1;
  double omega = 0.0;
  double tolerance = 0.0;
  std::vector<std::vector<WaveVector>> polylines;
};
IsoContour isofrequency_contours(int branch, double omega, int resolution);

/// Steady displacement amplitude at node idx for a time-harmonic unit cell
/// drive P at frequency omega with Delta != 0 on the whole cell (stop band or
/// otherwise non-resonant). Tensor-product trapezoid quadrature of
/// sqrt(3)/(16 pi^2) * B P / Delta * exp(-i k.x) over the canonical cell.
/// Throws NumericalError if |Delta| falls below `delta_floor` anywhere on the
/// quadrature grid.
Displacement2 nonresonant_green(double omega, const Displacement2& P, NodeIndex idx,
                                int quadrature_order = 512, bool parallel = true,
                                double delta_floor = 1e-8);

} // namespace latwave
