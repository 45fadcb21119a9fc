#include "latwave/greens.hpp"

#include <cmath>
#include <numbers>

#include "latwave/errors.hpp"
#include "latwave/special_functions.hpp"

namespace latwave {

namespace {
constexpr double kPi = std::numbers::pi;
const double kRt3 = std::numbers::sqrt3;

bool on_cell_edge_x(double kx) { return std::abs(std::abs(kx) - 2.0 * kPi) < 1e-9; }
bool on_cell_edge_y(double ky) { return std::abs(std::abs(ky) - 2.0 * kPi / kRt3) < 1e-9; }

complexd kernel_constant(const ResonantCarrier& rc) {
  const double disc = rc.cp.quad.discriminant();
  if (disc <= 0.0)
    throw ValidationError("asymptotic kernel: elliptic point, no real characteristic scale");
  return kRt3 / (8.0 * kPi * std::sqrt(disc)) / rc.C;
}
} // namespace

complexd resonance_constant(const CriticalPoint& cp) {
  const DispersionParts parts = dispersion_parts(cp.k);
  if (parts.s < 1e-10)
    throw ValidationError("resonance_constant: branch-touching point");
  const double omega = cp.omega_star;
  const double other = cp.branch == 1 ? branch_Omega(2, cp.k) : branch_Omega(1, cp.k);
  return complexd(0.0, 2.0 * omega * (other - omega * omega));
}

std::vector<ResonantCarrier> resonance_carriers(int resonance, const CensusReport& census) {
  const double omega_star = resonance_omega(resonance);
  std::vector<ResonantCarrier> carriers;
  for (const CriticalPoint& cp : census.points) {
    if (std::abs(cp.omega_star - omega_star) > 1e-6) continue;
    if (cp.klass != PointClass::saddle) continue;
    ResonantCarrier rc;
    rc.cp = cp;
    rc.B = compliance_numerator(omega_star * omega_star, cp.k);
    rc.C = resonance_constant(cp);
    rc.weight = 1.0;
    if (on_cell_edge_x(cp.k.kx)) rc.weight *= 0.5;
    if (on_cell_edge_y(cp.k.ky)) rc.weight *= 0.5;
    carriers.push_back(rc);
  }
  return carriers;
}

std::vector<ResonantCarrier> resonance_carriers(int resonance) {
  const CensusReport census = find_critical_points(resonance_branch(resonance));
  return resonance_carriers(resonance, census);
}

double hyperbolic_phase(double x, double y, double t, const QuadCoeffs& q) {
  if (!(t > 0.0)) throw ValidationError("hyperbolic_phase: requires t > 0");
  const double disc = q.discriminant();
  if (disc == 0.0) throw ValidationError("hyperbolic_phase: c^2 - 4ab must be nonzero");
  return (q.b * x * x + q.a * y * y - q.c * x * y) / (disc * t);
}

Displacement2 velocity_amplitude(const ResonantCarrier& rc, double x, double y, double t,
                                 const Displacement2& P) {
  if (!(t > 0.0)) throw ValidationError("velocity_amplitude: requires t > 0");
  const double r = hyperbolic_phase(x, y, t, rc.cp.quad);
  const complexd phase(std::cos(r), std::sin(r));
  const complexd factor = kernel_constant(rc) * phase / t;
  return factor * rc.B.apply(P);
}

std::optional<Displacement2> displacement_amplitude(const ResonantCarrier& rc, double x,
                                                    double y, double t, const Displacement2& P,
                                                    double r_floor) {
  if (!(t > 0.0)) throw ValidationError("displacement_amplitude: requires t > 0");
  const double r = hyperbolic_phase(x, y, t, rc.cp.quad);
  if (std::abs(r) <= r_floor) return std::nullopt;
  const complexd factor = kernel_constant(rc) * e1_imag_axis(r);
  return factor * rc.B.apply(P);
}

double source_log_slope(const std::vector<ResonantCarrier>& carriers, const Displacement2& P) {
  // At the source -ln|R| = ln t - ln|rho(x,y)|, so every carrier feeds the
  // same ln t with its kernel * B P; the carriers add coherently. The growth
  // rate is set by the frequency offset of the branch, Omega - omega*^2 =
  // 2 omega* (omega - omega*) + ..., whose Jacobian contributes the factor
  // 2 omega* relative to the squared-frequency kernel. Cross-checked against
  // a mode-sum (density of states) derivation and direct simulation.
  Displacement2 sum;
  for (const ResonantCarrier& rc : carriers)
    sum += (rc.weight * kernel_constant(rc)) * rc.B.apply(P);
  if (carriers.empty()) return 0.0;
  return 2.0 * carriers.front().cp.omega_star * std::sqrt(norm2(sum));
}

AsymptoticField total_field(const std::vector<ResonantCarrier>& carriers, int resonance,
                            const Displacement2& P, double t, int extent, double r_floor,
                            bool parallel) {
  if (!(t > 0.0)) throw ValidationError("total_field: requires t > 0");
  if (extent < 0) throw ValidationError("total_field: extent must be >= 0");
  AsymptoticField field;
  field.resonance = resonance;
  field.omega_star = resonance_omega(resonance);
  field.t = t;
  field.extent = extent;
  field.r_floor = r_floor;
  const int side = field.side();
  field.values.assign(static_cast<std::size_t>(side) * side, Displacement2{});
  field.masked.assign(static_cast<std::size_t>(side) * side, 0);
  for (const ResonantCarrier& rc : carriers) {
    bool seen = false;
    for (const auto& label : field.families) seen = seen || label == rc.cp.label;
    if (!seen) field.families.push_back(rc.cp.label);
  }
  field.source_slope = source_log_slope(carriers, P);

  // Union of the carriers' characteristic directions (rays recur across
  // image points with finite-difference jitter, hence the loose merge).
  for (const ResonantCarrier& rc : carriers) {
    const CharacteristicFan fan = characteristic_fan(rc.cp.quad, false);
    for (double alpha : fan.angles) {
      bool known = false;
      for (double seen : field.star_angles)
        if (std::abs(seen - alpha) < 1e-4) { known = true; break; }
      if (!known) field.star_angles.push_back(alpha);
    }
  }
  std::sort(field.star_angles.begin(), field.star_angles.end());

  struct Prepared {
    QuadCoeffs quad;
    complexd kernel; // weight * sqrt3/(8 pi C sqrt(disc))
    Displacement2 bp;
    double kx, ky;
  };
  std::vector<Prepared> prep;
  prep.reserve(carriers.size());
  for (const ResonantCarrier& rc : carriers)
    prep.push_back({rc.cp.quad, rc.weight * kernel_constant(rc), rc.B.apply(P),
                    rc.cp.k.kx, rc.cp.k.ky});

  const double omega_t = field.omega_star * t;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int n = -extent; n <= extent; ++n) {
    for (int m = -extent; m <= extent; ++m) {
      const Position pos = node_position({m, n});
      Displacement2 sum;
      bool mask = false;
      for (const Prepared& pc : prep) {
        const double r = hyperbolic_phase(pos.x, pos.y, t, pc.quad);
        if (std::abs(r) <= r_floor) {
          mask = true;
          break;
        }
        const double carrier_phase = omega_t - (pc.kx * pos.x + pc.ky * pos.y);
        const complexd carrier(std::cos(carrier_phase), std::sin(carrier_phase));
        sum += (pc.kernel * e1_imag_axis(r) * carrier) * pc.bp;
      }
      const std::size_t idx = field.index(m, n);
      field.masked[idx] = mask ? 1 : 0;
      field.values[idx] = mask ? Displacement2{} : sum;
    }
  }
  (void)parallel;
  return field;
}

AsymptoticField total_field(int resonance, const Displacement2& P, double t, int extent,
                            double r_floor, bool parallel) {
  return total_field(resonance_carriers(resonance), resonance, P, t, extent, r_floor, parallel);
}

} // namespace latwave
