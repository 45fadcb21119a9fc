#pragma once

// Stationary points of the dispersion surfaces: location by a Newton sweep
// over a deterministic seed grid, classification from the quadratic Taylor
// coefficients, and the characteristic-ray fans of the hyperbolic points.

#include <string>
#include <vector>

#include "latwave/dispersion.hpp"

namespace latwave {

/// Half-Hessian coefficients of Omega near a stationary point:
/// Omega - omega*^2 ~ a qx^2 + b qy^2 + c qx qy.
struct QuadCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double discriminant() const { return c * c - 4.0 * a * b; } // > 0 at saddles
};

enum class PointClass { maximum, minimum, saddle };
const char* to_string(PointClass klass);

struct CriticalPoint {
  WaveVector k;
  int branch = 1;
  double omega_star = 0.0;
  PointClass klass = PointClass::saddle;
  QuadCoeffs quad;
  std::string label; // two-digit family tag "ij" (auto-numbered when unknown)
};

struct CensusOptions {
  int seed_grid = 241;            // Newton starts per axis
  int max_newton_iters = 60;
  double grad_tol = 1e-12;        // stop when |grad Omega| drops below
  double merge_tol = 1e-4;        // cluster radius for duplicate roots
  double degeneracy_floor = 1e-10; // S(k) below this = branch touching
  double fd_step = 1e-3;          // base step for Hessian differences
};

/// Census of one branch. Non-converged seeds are counted, never silently
/// dropped; degenerate (branch-touching) encounters are excluded points.
struct CensusReport {
  std::vector<CriticalPoint> points; // sorted by (branch, omega*, kx, ky)
  int seeds = 0;
  int converged = 0;
  int hit_degenerate = 0;
  int failed = 0;
};

/// Analytic gradient of Omega_branch = F +- sqrt(S). Throws NumericalError
/// when S(k) is below the degeneracy floor (surfaces touch, no single-branch
/// derivative exists there).
void gradient_Omega(int branch, WaveVector k, double& dkx, double& dky,
                    double degeneracy_floor = 1e-10);

/// All stationary points of one branch inside the canonical cell, boundary
/// images included, deduplicated modulo cell periodicity and expanded back
/// over the (+-kx, +-ky) symmetry. Degenerate touchings are excluded.
CensusReport find_critical_points(int branch, const CensusOptions& opts = {},
                                  bool parallel = true);

/// Richardson-extrapolated central-difference Taylor coefficients at a
/// located stationary point. Throws NumericalError if the two extrapolation
/// levels disagree by more than `agreement_tol`.
QuadCoeffs quad_coeffs(int branch, WaveVector k, double fd_step = 1e-3,
                       double agreement_tol = 1e-6);

/// Class from the Hessian signature; throws NumericalError when an
/// eigenvalue magnitude falls below `eigen_floor`.
PointClass classify(const QuadCoeffs& q, double eigen_floor = 1e-9);

/// Characteristic directions of the hyperbolic operator
/// a d_xx + b d_yy + c d_xy. Empty when the point is elliptic.
struct CharacteristicFan {
  std::vector<double> slopes; // phi with solutions f(phi x - y)
  std::vector<double> angles; // ray directions in (-pi, pi], sorted
};
CharacteristicFan characteristic_fan(const QuadCoeffs& q, bool include_mirror = false);

/// Resonance index -> (branch, omega*): 1 -> (1, sqrt 6), 2 -> (1, 2.25),
/// 3 -> (2, sqrt 2).
int resonance_branch(int resonance);
double resonance_omega(int resonance);

/// Union of the characteristic fans of every saddle at the given resonance,
/// merged to `merge_tol` (<= 0 picks a default safely between numerical
/// jitter and the smallest true ray separation); empty for resonance 1.
std::vector<double> star_directions(int resonance, const CensusReport& census,
                                    double merge_tol = 0.0);
/// Convenience overload running its own census.
std::vector<double> star_directions(int resonance);

} // namespace latwave
