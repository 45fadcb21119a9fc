#include "latwave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "latwave/errors.hpp"
#include "latwave/parallel.hpp"

namespace latwave {

namespace {
constexpr double kPi = std::numbers::pi;
const double kRt3 = std::numbers::sqrt3;
} // namespace

double cell_kx_max() { return 2.0 * kPi; }
double cell_ky_max() { return 2.0 * kPi / kRt3; }

WaveVector wrap_to_cell(WaveVector k) {
  const double px = 4.0 * kPi;
  const double py = 4.0 * kPi / kRt3;
  double kx = std::remainder(k.kx, px);
  double ky = std::remainder(k.ky, py);
  // std::remainder returns values in [-p/2, p/2]; fold the upper endpoint.
  if (kx == px / 2.0) kx = -px / 2.0;
  if (ky == py / 2.0) ky = -py / 2.0;
  return {kx, ky};
}

DispersionParts dispersion_parts(WaveVector k) {
  const double ck = std::cos(k.kx);
  const double ch = std::cos(0.5 * k.kx);
  const double sh = std::sin(0.5 * k.kx);
  const double cy = std::cos(0.5 * kRt3 * k.ky);
  const double sy = std::sin(0.5 * kRt3 * k.ky);
  const double g = ck - ch * cy;
  DispersionParts p;
  p.f = 1.0 - ck + 2.0 * (1.0 - ch * cy);
  p.s = g * g + 3.0 * sh * sh * sy * sy;
  return p;
}

BranchFrequencies branch_frequencies(WaveVector k) {
  const DispersionParts p = dispersion_parts(k);
  const double root = std::sqrt(std::max(p.s, 0.0));
  BranchFrequencies b;
  b.Omega1 = p.f + root;
  b.Omega2 = std::max(p.f - root, 0.0); // clip -0 roundoff at the acoustic origin
  b.omega1 = std::sqrt(b.Omega1);
  b.omega2 = std::sqrt(b.Omega2);
  return b;
}

double branch_omega(int branch, WaveVector k) {
  const BranchFrequencies b = branch_frequencies(k);
  return branch == 1 ? b.omega1 : b.omega2;
}

double branch_Omega(int branch, WaveVector k) {
  const BranchFrequencies b = branch_frequencies(k);
  return branch == 1 ? b.Omega1 : b.Omega2;
}

DynamicMatrix dynamic_matrix(WaveVector k) {
  const double ck = std::cos(k.kx);
  const double ch = std::cos(0.5 * k.kx);
  const double sh = std::sin(0.5 * k.kx);
  const double cy = std::cos(0.5 * kRt3 * k.ky);
  const double sy = std::sin(0.5 * kRt3 * k.ky);
  DynamicMatrix m;
  m.xx = 2.0 * (1.0 - ck) + 1.0 - ch * cy;
  m.yy = 3.0 * (1.0 - ch * cy);
  m.xy = kRt3 * sh * sy;
  return m;
}

ComplianceNumerator compliance_numerator(double Omega, WaveVector k) {
  const DynamicMatrix m = dynamic_matrix(k);
  // Adjugate of (M - Omega I).
  return {m.yy - Omega, m.xx - Omega, -m.xy};
}

double dispersion_determinant(double Omega, WaveVector k) {
  const DispersionParts p = dispersion_parts(k);
  const double root = std::sqrt(std::max(p.s, 0.0));
  return (Omega - (p.f + root)) * (Omega - (p.f - root));
}

Displacement2 branch_polarization(int branch, WaveVector k) {
  const DynamicMatrix m = dynamic_matrix(k);
  const double Omega = branch_Omega(branch, k);
  // Null vector of (M - Omega I); pick the numerically larger of the two rows.
  double v1x = m.xy, v1y = Omega - m.xx;
  double v2x = Omega - m.yy, v2y = m.xy;
  double n1 = v1x * v1x + v1y * v1y;
  double n2 = v2x * v2x + v2y * v2y;
  double vx = n1 >= n2 ? v1x : v2x;
  double vy = n1 >= n2 ? v1y : v2y;
  double n = std::sqrt(std::max(n1, n2));
  if (n == 0.0) throw NumericalError("branch_polarization: degenerate point, polarization undefined");
  return {vx / n, vy / n};
}

double SurfaceGrid::kx_at(int ix) const {
  return -cell_kx_max() + 2.0 * cell_kx_max() * ix / (resolution - 1);
}

double SurfaceGrid::ky_at(int iy) const {
  return -cell_ky_max() + 2.0 * cell_ky_max() * iy / (resolution - 1);
}

SurfaceGrid sample_surface(int branch, int resolution, bool parallel) {
  if (branch != 1 && branch != 2) throw ValidationError("sample_surface: branch must be 1 or 2");
  if (resolution < 2) throw ValidationError("sample_surface: resolution must be >= 2");
  SurfaceGrid grid;
  grid.branch = branch;
  grid.resolution = resolution;
  grid.omega.resize(static_cast<std::size_t>(resolution) * resolution);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      grid.omega[static_cast<std::size_t>(iy) * resolution + ix] =
          branch_omega(branch, {grid.kx_at(ix), grid.ky_at(iy)});
    }
  }
  (void)parallel;
  return grid;
}

namespace {

// Marching squares on the sampled surface. Vertices are produced once per
// grid edge (keyed by the edge id), so segments from adjacent cells share
// endpoints exactly and chain assembly is a pure adjacency walk.

struct EdgeKey {
  long long id;
  bool operator<(const EdgeKey& o) const { return id < o.id; }
};

EdgeKey horiz_edge(int ix, int iy, int res) { return {2LL * (static_cast<long long>(iy) * res + ix)}; }
EdgeKey vert_edge(int ix, int iy, int res) { return {2LL * (static_cast<long long>(iy) * res + ix) + 1}; }

} // namespace

IsoContour isofrequency_contours(int branch, double omega, int resolution) {
  if (branch != 1 && branch != 2) throw ValidationError("isofrequency_contours: branch must be 1 or 2");
  if (!(omega > 0.0)) throw ValidationError("isofrequency_contours: omega must be positive");
  if (resolution < 2) throw ValidationError("isofrequency_contours: resolution must be >= 2");

  const SurfaceGrid grid = sample_surface(branch, resolution);
  const int res = resolution;
  auto f = [&](int ix, int iy) { return grid.at(ix, iy) - omega; };

  // Interpolated crossing point on an edge, computed lazily and cached.
  std::map<EdgeKey, WaveVector> verts;
  auto edge_vertex = [&](EdgeKey key, int ix0, int iy0, int ix1, int iy1) {
    auto it = verts.find(key);
    if (it != verts.end()) return it->second;
    const double f0 = f(ix0, iy0), f1 = f(ix1, iy1);
    double t = f0 / (f0 - f1);
    t = std::clamp(t, 0.0, 1.0);
    WaveVector v{grid.kx_at(ix0) + t * (grid.kx_at(ix1) - grid.kx_at(ix0)),
                 grid.ky_at(iy0) + t * (grid.ky_at(iy1) - grid.ky_at(iy0))};
    verts.emplace(key, v);
    return v;
  };

  // Collect segments as pairs of edge keys.
  std::vector<std::pair<EdgeKey, EdgeKey>> segments;
  for (int iy = 0; iy + 1 < res; ++iy) {
    for (int ix = 0; ix + 1 < res; ++ix) {
      const double f00 = f(ix, iy), f10 = f(ix + 1, iy);
      const double f01 = f(ix, iy + 1), f11 = f(ix + 1, iy + 1);
      int c = (f00 > 0.0 ? 1 : 0) | (f10 > 0.0 ? 2 : 0) | (f11 > 0.0 ? 4 : 0) | (f01 > 0.0 ? 8 : 0);
      if (c == 0 || c == 15) continue;

      const EdgeKey bottom = horiz_edge(ix, iy, res);
      const EdgeKey top = horiz_edge(ix, iy + 1, res);
      const EdgeKey left = vert_edge(ix, iy, res);
      const EdgeKey right = vert_edge(ix + 1, iy, res);
      auto emit = [&](EdgeKey a, EdgeKey b) { segments.emplace_back(a, b); };

      switch (c) {
        case 1: case 14: emit(left, bottom); break;
        case 2: case 13: emit(bottom, right); break;
        case 3: case 12: emit(left, right); break;
        case 4: case 11: emit(right, top); break;
        case 6: case 9:  emit(bottom, top); break;
        case 7: case 8:  emit(left, top); break;
        case 5: case 10: {
          // Saddle cell: disambiguate with the cell-centre value.
          const double centre = 0.25 * (f00 + f10 + f01 + f11);
          const bool centre_pos = centre > 0.0;
          if ((c == 5) == centre_pos) {
            emit(left, top);
            emit(bottom, right);
          } else {
            emit(left, bottom);
            emit(right, top);
          }
          break;
        }
        default: break;
      }
    }
  }

  // Materialize vertices for every referenced edge key.
  auto realize = [&](EdgeKey key) {
    const long long raw = key.id;
    const bool vertical = raw & 1;
    const long long cellid = raw / 2;
    const int ix = static_cast<int>(cellid % res);
    const int iy = static_cast<int>(cellid / res);
    if (vertical)
      return edge_vertex(key, ix, iy, ix, iy + 1);
    return edge_vertex(key, ix, iy, ix + 1, iy);
  };

  // Chain assembly: adjacency list keyed by edge id.
  std::map<EdgeKey, std::vector<std::size_t>> touching;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    touching[segments[i].first].push_back(i);
    touching[segments[i].second].push_back(i);
  }

  IsoContour contour;
  contour.branch = branch;
  contour.omega = omega;

  std::vector<char> used(segments.size(), 0);
  auto walk = [&](std::size_t start, EdgeKey from) {
    std::vector<EdgeKey> chain;
    chain.push_back(from);
    EdgeKey cur = from;
    std::size_t seg = start;
    while (true) {
      used[seg] = 1;
      EdgeKey next = segments[seg].first.id == cur.id ? segments[seg].second : segments[seg].first;
      chain.push_back(next);
      cur = next;
      std::size_t cont = segments.size();
      for (std::size_t cand : touching[cur])
        if (!used[cand]) { cont = cand; break; }
      if (cont == segments.size()) break;
      seg = cont;
    }
    return chain;
  };

  std::vector<std::vector<EdgeKey>> chains;
  // Open chains first (start at degree-1 vertices) so they are not split.
  for (auto& [key, segs] : touching) {
    std::size_t live = 0;
    std::size_t first = segments.size();
    for (std::size_t s : segs)
      if (!used[s]) { ++live; if (first == segments.size()) first = s; }
    if (live == 1) chains.push_back(walk(first, key));
  }
  for (std::size_t i = 0; i < segments.size(); ++i)
    if (!used[i]) chains.push_back(walk(i, segments[i].first));

  double max_err = 0.0;
  for (auto& chain : chains) {
    std::vector<WaveVector> line;
    line.reserve(chain.size());
    for (EdgeKey key : chain) {
      WaveVector v = realize(key);
      line.push_back(v);
      max_err = std::max(max_err, std::abs(branch_omega(branch, v) - omega));
    }
    contour.polylines.push_back(std::move(line));
  }
  std::sort(contour.polylines.begin(), contour.polylines.end(),
            [](const std::vector<WaveVector>& a, const std::vector<WaveVector>& b) {
              if (a.empty() || b.empty()) return a.size() < b.size();
              if (a[0].kx != b[0].kx) return a[0].kx < b[0].kx;
              return a[0].ky < b[0].ky;
            });
  contour.tolerance = max_err;
  return contour;
}

Displacement2 nonresonant_green(double omega, const Displacement2& P, NodeIndex idx,
                                int quadrature_order, bool parallel, double delta_floor) {
  if (quadrature_order < 8) throw ValidationError("nonresonant_green: quadrature_order must be >= 8");
  const double Omega = omega * omega;
  const int n = quadrature_order;
  const double dkx = 4.0 * kPi / n;
  const double dky = (4.0 * kPi / kRt3) / n;
  const Position x = node_position(idx);

  // Integrand is periodic over the cell, so the trapezoid rule is the
  // left-point sum; one pass also audits |Delta| against the floor.
  struct Acc {
    complexd ux{}, uy{};
    double min_delta = 1e300;
    Acc operator+(const Acc& o) const {
      Acc r;
      r.ux = ux + o.ux;
      r.uy = uy + o.uy;
      r.min_delta = std::min(min_delta, o.min_delta);
      return r;
    }
  };

  const std::size_t total = static_cast<std::size_t>(n) * n;
  Acc sum = blocked_sum<Acc>(
      total,
      [&](std::size_t flat) {
        const int iy = static_cast<int>(flat / n);
        const int ix = static_cast<int>(flat % n);
        const WaveVector k{-2.0 * kPi + dkx * ix, -2.0 * kPi / kRt3 + dky * iy};
        const double delta = dispersion_determinant(Omega, k);
        const ComplianceNumerator b = compliance_numerator(Omega, k);
        const Displacement2 bp = b.apply(P);
        const double phase = -(k.kx * x.x + k.ky * x.y);
        const complexd rot{std::cos(phase), std::sin(phase)};
        Acc a;
        a.ux = rot * bp.x / delta;
        a.uy = rot * bp.y / delta;
        a.min_delta = std::abs(delta);
        return a;
      },
      parallel, 4096);

  if (sum.min_delta < delta_floor) {
    std::ostringstream msg;
    msg << "nonresonant_green: resonance detected, min |Delta| = " << sum.min_delta
        << " at omega = " << omega;
    throw NumericalError(msg.str());
  }
  const double prefactor = kRt3 / (16.0 * kPi * kPi) * dkx * dky;
  return {prefactor * sum.ux, prefactor * sum.uy};
}

} // namespace latwave
