#pragma once

// Large-time asymptotics of the lattice Green's tensor near the resonant
// (standing-wave) points: the resonance constant C, the hyperbolic phase R,
// per-point velocity and displacement amplitudes, and superposition of all
// saddle carriers into the star-shaped field on lattice sites.

#include <optional>
#include <vector>

#include "latwave/critical_points.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

/// Everything the asymptotic kernel needs about one resonant point.
/// `weight` is the fraction of the point's neighbourhood contained in the
/// canonical cell (1 interior, 1/2 on an edge): boundary images are listed
/// once per edge, so the inverse-transform normalization requires it.
struct ResonantCarrier {
  CriticalPoint cp;
  ComplianceNumerator B;
  complexd C{0.0, 0.0};
  double weight = 1.0;
};

/// C = 2 i omega (Omega_other - omega^2) with Omega_other the squared
/// frequency of the opposite branch at the same wave vector. Purely
/// imaginary. Throws on branch-touching points.
complexd resonance_constant(const CriticalPoint& cp);

/// Saddle carriers of one resonance assembled from a census (all images in
/// the cell, each with its own coefficients, B, C and coverage weight).
/// Non-saddle families at the frequency carry no hyperbolic term and are
/// skipped. Resonance 1 therefore yields an empty list.
std::vector<ResonantCarrier> resonance_carriers(int resonance, const CensusReport& census);
std::vector<ResonantCarrier> resonance_carriers(int resonance);

/// Phase R = (b x^2 + a y^2 - c x y) / ((c^2 - 4 a b) t); zero exactly on the
/// characteristic rays. Requires t > 0.
double hyperbolic_phase(double x, double y, double t, const QuadCoeffs& q);

/// Velocity amplitude of one saddle carrier at (x, y, t):
///   sqrt(3) / (8 pi C sqrt(c^2-4ab) t) * exp(i R) * B P.
/// Requires a saddle (c^2 - 4ab > 0) and t > 0.
Displacement2 velocity_amplitude(const ResonantCarrier& rc, double x, double y, double t,
                                 const Displacement2& P);

/// Displacement amplitude of one saddle carrier,
///   sqrt(3) / (8 pi C sqrt(c^2-4ab)) * E1(-i R) * B P.
/// Returns nullopt (masked) when |R| <= r_floor, where the expansion breaks
/// down on a characteristic; higher-order surface terms would be needed.
std::optional<Displacement2> displacement_amplitude(const ResonantCarrier& rc, double x,
                                                    double y, double t, const Displacement2& P,
                                                    double r_floor = 1e-3);

/// Superposed asymptotic field on lattice sites |m|, |n| <= extent at time t.
/// Masked nodes (|R| below floor for some carrier) hold zero.
struct AsymptoticField {
  int resonance = 0;
  double omega_star = 0.0;
  double t = 0.0;
  int extent = 0;
  double r_floor = 1e-3;
  std::vector<Displacement2> values; // (2*extent+1)^2 row-major over n, then m
  std::vector<unsigned char> masked;
  std::vector<std::string> families; // contributing carrier labels
  std::vector<double> star_angles;   // union of characteristic directions
  double source_slope = 0.0;         // d|U(0,0)| / d ln t predicted by the carriers

  int side() const { return 2 * extent + 1; }
  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(n + extent) * side() + (m + extent);
  }
  const Displacement2& at(int m, int n) const { return values[index(m, n)]; }
  bool is_masked(int m, int n) const { return masked[index(m, n)] != 0; }
};

AsymptoticField total_field(int resonance, const Displacement2& P, double t, int extent,
                            double r_floor = 1e-3, bool parallel = true);
AsymptoticField total_field(const std::vector<ResonantCarrier>& carriers, int resonance,
                            const Displacement2& P, double t, int extent,
                            double r_floor = 1e-3, bool parallel = true);

/// Coefficient of ln t in the source-node displacement amplitude: magnitude
/// of the coherent, coverage-weighted sum of the carriers' kernels.
double source_log_slope(const std::vector<ResonantCarrier>& carriers, const Displacement2& P);

} // namespace latwave
