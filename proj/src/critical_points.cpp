#include "latwave/critical_points.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "latwave/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace latwave {

namespace {

constexpr double kPi = std::numbers::pi;
const double kRt3 = std::numbers::sqrt3;

struct Grad {
  double fx, fy; // dF/dkx, dF/dky
  double sx, sy; // dS/dkx, dS/dky
  double s;
};

Grad parts_gradient(WaveVector k) {
  const double ck = std::cos(k.kx);
  const double sk = std::sin(k.kx);
  const double ch = std::cos(0.5 * k.kx);
  const double sh = std::sin(0.5 * k.kx);
  const double cy = std::cos(0.5 * kRt3 * k.ky);
  const double sy = std::sin(0.5 * kRt3 * k.ky);
  const double g = ck - ch * cy;
  Grad out;
  out.s = g * g + 3.0 * sh * sh * sy * sy;
  out.fx = sk + sh * cy;
  out.fy = kRt3 * ch * sy;
  const double gx = -sk + 0.5 * sh * cy;
  const double gy = 0.5 * kRt3 * ch * sy;
  out.sx = 2.0 * g * gx + 3.0 * sh * ch * sy * sy;
  out.sy = 2.0 * g * gy + 3.0 * kRt3 * sh * sh * sy * cy;
  return out;
}

double branch_sign(int branch) { return branch == 1 ? 1.0 : -1.0; }

} // namespace

const char* to_string(PointClass klass) {
  switch (klass) {
    case PointClass::maximum: return "maximum";
    case PointClass::minimum: return "minimum";
    case PointClass::saddle:  return "saddle";
  }
  return "?";
}

void gradient_Omega(int branch, WaveVector k, double& dkx, double& dky,
                    double degeneracy_floor) {
  if (branch != 1 && branch != 2) throw ValidationError("gradient_Omega: branch must be 1 or 2");
  const Grad g = parts_gradient(k);
  if (g.s < degeneracy_floor)
    throw NumericalError("gradient_Omega: branches touch here (S below floor), "
                         "single-branch gradient undefined");
  const double inv = branch_sign(branch) / (2.0 * std::sqrt(g.s));
  dkx = g.fx + inv * g.sx;
  dky = g.fy + inv * g.sy;
}

QuadCoeffs quad_coeffs(int branch, WaveVector k, double fd_step, double agreement_tol) {
  auto omega2 = [&](double qx, double qy) {
    return branch_Omega(branch, {k.kx + qx, k.ky + qy});
  };
  auto level = [&](double h) {
    QuadCoeffs q;
    const double f0 = omega2(0.0, 0.0);
    q.a = (omega2(h, 0.0) - 2.0 * f0 + omega2(-h, 0.0)) / (2.0 * h * h);
    q.b = (omega2(0.0, h) - 2.0 * f0 + omega2(0.0, -h)) / (2.0 * h * h);
    q.c = (omega2(h, h) + omega2(-h, -h) - omega2(h, -h) - omega2(-h, h)) / (4.0 * h * h);
    return q;
  };
  // Two Richardson levels from central differences at h and h/2.
  auto rich = [&](double h) {
    const QuadCoeffs c1 = level(h);
    const QuadCoeffs c2 = level(0.5 * h);
    return QuadCoeffs{(4.0 * c2.a - c1.a) / 3.0, (4.0 * c2.b - c1.b) / 3.0,
                      (4.0 * c2.c - c1.c) / 3.0};
  };
  const QuadCoeffs r1 = rich(fd_step);
  const QuadCoeffs r2 = rich(0.5 * fd_step);
  const double disagreement = std::max({std::abs(r1.a - r2.a), std::abs(r1.b - r2.b),
                                        std::abs(r1.c - r2.c)});
  if (disagreement > agreement_tol) {
    std::ostringstream msg;
    msg << "quad_coeffs: Richardson levels disagree by " << disagreement << " at k = ("
        << k.kx << ", " << k.ky << ")";
    throw NumericalError(msg.str());
  }
  return r2;
}

PointClass classify(const QuadCoeffs& q, double eigen_floor) {
  // Eigenvalues of the Hessian [[2a, c], [c, 2b]].
  const double tr = q.a + q.b;
  const double rad = std::sqrt((q.a - q.b) * (q.a - q.b) + q.c * q.c);
  const double l1 = tr + rad;
  const double l2 = tr - rad;
  if (std::abs(l1) < eigen_floor || std::abs(l2) < eigen_floor)
    throw NumericalError("classify: degenerate Hessian (eigenvalue below floor)");
  if (l1 > 0.0 && l2 > 0.0) return PointClass::minimum;
  if (l1 < 0.0 && l2 < 0.0) return PointClass::maximum;
  return PointClass::saddle;
}

CharacteristicFan characteristic_fan(const QuadCoeffs& q, bool include_mirror) {
  if (q.a == 0.0) throw ValidationError("characteristic_fan: requires a != 0");
  CharacteristicFan fan;
  const double half = q.c / (2.0 * q.a);
  const double rad = half * half - q.b / q.a;
  if (rad < 0.0) return fan; // elliptic point, no characteristics

  auto add_slope = [&](double phi) {
    for (double seen : fan.slopes)
      if (std::abs(seen - phi) < 1e-12) return;
    fan.slopes.push_back(phi);
  };
  const double root = std::sqrt(rad);
  add_slope(half + root);
  add_slope(half - root);
  if (include_mirror) {
    add_slope(-half + root);
    add_slope(-half - root);
  }

  // Each slope phi contributes the direction atan(phi) and its opposite.
  auto add_angle = [&](double alpha) {
    if (alpha <= -kPi) alpha += 2.0 * kPi;
    if (alpha > kPi) alpha -= 2.0 * kPi;
    for (double seen : fan.angles)
      if (std::abs(seen - alpha) < 1e-12) return;
    fan.angles.push_back(alpha);
  };
  for (double phi : fan.slopes) {
    const double alpha = std::atan(phi);
    add_angle(alpha);
    add_angle(alpha + kPi);
  }
  std::sort(fan.angles.begin(), fan.angles.end());
  std::sort(fan.slopes.begin(), fan.slopes.end());
  return fan;
}

namespace {

// Reference coordinates of the known standing-wave families in the first
// quadrant of the canonical cell, used only to attach stable two-digit
// labels (first digit: frequency group, second: coordinate family).
struct FamilyRef {
  int branch;
  double kx, ky;
  const char* label;
};

const FamilyRef kFamilyCatalog[] = {
    {1, 0.0, 3.6275987, "11"},       {1, 6.2831853, 0.0, "12"},
    {1, 3.1415927, 1.8137994, "13"}, {1, 2.8909370, 3.6275987, "21"},
    {1, 3.3922483, 0.0, "22"},       {1, 1.6961242, 2.9377732, "23"},
    {1, 4.5870611, 0.6898255, "24"}, {2, 0.0, 3.6275987, "31"},
    {2, 6.2831853, 0.0, "32"},       {2, 3.1415927, 1.8137994, "33"},
};

std::string match_label(int branch, WaveVector first_quadrant, int& auto_counter) {
  for (const FamilyRef& ref : kFamilyCatalog) {
    if (ref.branch != branch) continue;
    if (std::abs(first_quadrant.kx - ref.kx) < 1e-3 &&
        std::abs(first_quadrant.ky - ref.ky) < 1e-3)
      return ref.label;
  }
  std::ostringstream name;
  name << "b" << branch << "x" << auto_counter++;
  return name.str();
}

// Newton iteration on grad Omega = 0 with a finite-difference Jacobian of
// the analytic gradient.
bool newton_refine(int branch, WaveVector& k, const CensusOptions& opts) {
  const double jac_h = 1e-6;
  for (int iter = 0; iter < opts.max_newton_iters; ++iter) {
    double gx, gy;
    try {
      gradient_Omega(branch, k, gx, gy, opts.degeneracy_floor);
    } catch (const NumericalError&) {
      return false;
    }
    if (std::hypot(gx, gy) < opts.grad_tol) return true;
    double gxp, gyp, gxm, gym;
    double j11, j12, j21, j22;
    try {
      gradient_Omega(branch, {k.kx + jac_h, k.ky}, gxp, gyp, opts.degeneracy_floor);
      gradient_Omega(branch, {k.kx - jac_h, k.ky}, gxm, gym, opts.degeneracy_floor);
      j11 = (gxp - gxm) / (2.0 * jac_h);
      j21 = (gyp - gym) / (2.0 * jac_h);
      gradient_Omega(branch, {k.kx, k.ky + jac_h}, gxp, gyp, opts.degeneracy_floor);
      gradient_Omega(branch, {k.kx, k.ky - jac_h}, gxm, gym, opts.degeneracy_floor);
      j12 = (gxp - gxm) / (2.0 * jac_h);
      j22 = (gyp - gym) / (2.0 * jac_h);
    } catch (const NumericalError&) {
      return false;
    }
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-14) return false;
    const double dx = (j22 * gx - j12 * gy) / det;
    const double dy = (-j21 * gx + j11 * gy) / det;
    // Trust region: steps beyond one seed spacing rarely converge usefully.
    const double step = std::hypot(dx, dy);
    const double cap = 0.35;
    const double scale = step > cap ? cap / step : 1.0;
    k.kx -= scale * dx;
    k.ky -= scale * dy;
  }
  double gx, gy;
  try {
    gradient_Omega(branch, k, gx, gy, opts.degeneracy_floor);
  } catch (const NumericalError&) {
    return false;
  }
  return std::hypot(gx, gy) < opts.grad_tol;
}

double wrapped_axis_distance(double a, double b, double period) {
  return std::abs(std::remainder(a - b, period));
}

bool same_point_mod_cell(WaveVector a, WaveVector b, double tol) {
  return wrapped_axis_distance(a.kx, b.kx, 4.0 * kPi) < tol &&
         wrapped_axis_distance(a.ky, b.ky, 4.0 * kPi / kRt3) < tol;
}

} // namespace

int resonance_branch(int resonance) {
  switch (resonance) {
    case 1: case 2: return 1;
    case 3: return 2;
  }
  throw ValidationError("resonance index must be 1, 2 or 3");
}

double resonance_omega(int resonance) {
  switch (resonance) {
    case 1: return std::sqrt(6.0);
    case 2: return 2.25;
    case 3: return std::sqrt(2.0);
  }
  throw ValidationError("resonance index must be 1, 2 or 3");
}

CensusReport find_critical_points(int branch, const CensusOptions& opts, bool parallel) {
  if (branch != 1 && branch != 2) throw ValidationError("find_critical_points: branch must be 1 or 2");
  CensusReport report;
  const int n = opts.seed_grid;
  report.seeds = n * n;

  // Converged roots from every seed; the half-open seed lattice covers the
  // cell, symmetry multiplies hits but dedup below handles that. Rows are
  // collected separately and concatenated in row order so the outcome does
  // not depend on thread scheduling.
  std::vector<std::vector<WaveVector>> roots_by_row(static_cast<std::size_t>(n));
  int converged = 0, degenerate = 0, failed = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : converged, degenerate, failed) if (parallel)
#endif
  for (int iy = 0; iy < n; ++iy) {
    std::vector<WaveVector>& local = roots_by_row[static_cast<std::size_t>(iy)];
    for (int ix = 0; ix < n; ++ix) {
      WaveVector k{-2.0 * kPi + 4.0 * kPi * ix / n, -2.0 * kPi / kRt3 + (4.0 * kPi / kRt3) * iy / n};
      const DispersionParts p = dispersion_parts(k);
      if (p.s < 1e-4) { // seed too close to a branch touching, skip outright
        ++degenerate;
        continue;
      }
      if (newton_refine(branch, k, opts)) {
        ++converged;
        local.push_back(wrap_to_cell(k));
      } else {
        ++failed;
      }
    }
  }
  (void)parallel;
  std::vector<WaveVector> roots;
  for (const auto& row : roots_by_row) roots.insert(roots.end(), row.begin(), row.end());
  report.converged = converged;
  report.hit_degenerate = degenerate;
  report.failed = failed;

  // Deduplicate modulo cell periodicity, then modulo the (+-, +-) sign
  // symmetry, keeping one first-quadrant representative per family.
  std::vector<WaveVector> families;
  for (const WaveVector& r : roots) {
    WaveVector fq{std::abs(r.kx), std::abs(r.ky)};
    bool known = false;
    for (const WaveVector& f : families)
      if (same_point_mod_cell(fq, f, opts.merge_tol)) { known = true; break; }
    if (!known) families.push_back(fq);
  }
  std::sort(families.begin(), families.end(), [](const WaveVector& a, const WaveVector& b) {
    if (a.kx != b.kx) return a.kx < b.kx;
    return a.ky < b.ky;
  });

  // Polish each family representative hard, then expand its sign and
  // periodic images across the closed cell.
  int auto_counter = 0;
  for (WaveVector& fam : families) {
    CensusOptions polish = opts;
    polish.max_newton_iters = 100;
    if (!newton_refine(branch, fam, polish)) {
      ++report.failed; // polish of a merged representative lost convergence
      continue;
    }
    WaveVector fq{std::abs(fam.kx), std::abs(fam.ky)};
    // Snap tiny components so boundary families expand exactly.
    if (fq.kx < 1e-9) fq.kx = 0.0;
    if (fq.ky < 1e-9) fq.ky = 0.0;
    if (std::abs(fq.kx - 2.0 * kPi) < 1e-9) fq.kx = 2.0 * kPi;
    if (std::abs(fq.ky - 2.0 * kPi / kRt3) < 1e-9) fq.ky = 2.0 * kPi / kRt3;

    const double omega_star = branch_omega(branch, fq);
    const std::string label = match_label(branch, fq, auto_counter);
    const QuadCoeffs q_ref = quad_coeffs(branch, fq, opts.fd_step);
    const PointClass klass = classify(q_ref);

    std::vector<WaveVector> images;
    auto add_image = [&](double kx, double ky) {
      if (std::abs(kx) > 2.0 * kPi + 1e-9 || std::abs(ky) > 2.0 * kPi / kRt3 + 1e-9) return;
      for (const WaveVector& img : images)
        if (std::abs(img.kx - kx) < 1e-9 && std::abs(img.ky - ky) < 1e-9) return;
      images.push_back({kx, ky});
    };
    for (double sx : {1.0, -1.0})
      for (double sy : {1.0, -1.0})
        for (int px = -1; px <= 1; ++px)
          for (int py = -1; py <= 1; ++py)
            add_image(sx * fq.kx + 4.0 * kPi * px, sy * fq.ky + (4.0 * kPi / kRt3) * py);

    for (const WaveVector& img : images) {
      CriticalPoint cp;
      cp.k = img;
      cp.branch = branch;
      cp.omega_star = omega_star;
      cp.klass = klass;
      // Coefficients at the image itself; c flips sign under a single-axis
      // reflection, so each image carries its own set.
      cp.quad = quad_coeffs(branch, img, opts.fd_step);
      cp.label = label;
      report.points.push_back(cp);
    }
  }

  std::sort(report.points.begin(), report.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              if (a.branch != b.branch) return a.branch < b.branch;
              if (a.omega_star != b.omega_star) return a.omega_star < b.omega_star;
              if (a.k.kx != b.k.kx) return a.k.kx < b.k.kx;
              return a.k.ky < b.k.ky;
            });
  return report;
}

std::vector<double> star_directions(int resonance, const CensusReport& census,
                                    double merge_tol) {
  // Angles of one ray recur across image points with finite-difference
  // jitter; true distinct rays are separated by several degrees.
  if (merge_tol <= 0.0) merge_tol = 1e-4;
  const double omega_star = resonance_omega(resonance);
  std::vector<double> angles;
  for (const CriticalPoint& cp : census.points) {
    if (std::abs(cp.omega_star - omega_star) > 1e-6) continue;
    if (cp.klass != PointClass::saddle) continue;
    const CharacteristicFan fan = characteristic_fan(cp.quad, false);
    for (double alpha : fan.angles) {
      bool known = false;
      for (double seen : angles)
        if (std::abs(seen - alpha) < merge_tol) { known = true; break; }
      if (!known) angles.push_back(alpha);
    }
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

std::vector<double> star_directions(int resonance) {
  const CensusReport census = find_critical_points(resonance_branch(resonance));
  return star_directions(resonance, census);
}

} // namespace latwave
