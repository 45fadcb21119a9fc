#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "latwave/dispersion.hpp"
#include "latwave/errors.hpp"

using namespace latwave;

namespace {
constexpr double kPi = std::numbers::pi;
const double kRt3 = std::numbers::sqrt3;

WaveVector random_k(std::mt19937& rng) {
  std::uniform_real_distribution<double> dx(-2.0 * kPi, 2.0 * kPi);
  std::uniform_real_distribution<double> dy(-2.0 * kPi / kRt3, 2.0 * kPi / kRt3);
  return {dx(rng), dy(rng)};
}
} // namespace

TEST_CASE("dispersion parts at landmark wave vectors") {
  const DispersionParts origin = dispersion_parts({0.0, 0.0});
  CHECK(std::abs(origin.f) < 1e-15);
  CHECK(std::abs(origin.s) < 1e-15);

  const DispersionParts zone_x = dispersion_parts({2.0 * kPi, 0.0});
  CHECK(zone_x.f == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(zone_x.s == doctest::Approx(4.0).epsilon(1e-14));

  const DispersionParts zone_y = dispersion_parts({0.0, 2.0 * kPi / kRt3});
  CHECK(zone_y.f == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(zone_y.s == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("branch frequencies at standing-wave points") {
  const BranchFrequencies zx = branch_frequencies({2.0 * kPi, 0.0});
  CHECK(zx.omega1 == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(zx.omega2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  const BranchFrequencies origin = branch_frequencies({0.0, 0.0});
  CHECK(origin.omega1 == 0.0);
  CHECK(origin.omega2 == 0.0);

  // Interior family at (pi, pi/sqrt(3)); the 7-digit decimal is the printed
  // form of pi/sqrt(3).
  CHECK(branch_omega(1, {kPi, 1.8137994}) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-7));
  CHECK(branch_omega(1, {kPi, kPi / kRt3}) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
}

TEST_CASE("compliance numerator at standing-wave points") {
  const ComplianceNumerator top = compliance_numerator(6.0, {2.0 * kPi, 0.0});
  CHECK(top.xx == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(top.yy == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(top.xy == doctest::Approx(0.0).epsilon(1e-14));

  const ComplianceNumerator low = compliance_numerator(2.0, {2.0 * kPi, 0.0});
  CHECK(low.xx == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(low.yy == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(low.xy == doctest::Approx(0.0).epsilon(1e-14));

  const ComplianceNumerator mid = compliance_numerator(6.0, {kPi, 1.8137994});
  CHECK(mid.xx == doctest::Approx(-3.0).epsilon(1e-7));
  CHECK(mid.yy == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(mid.xy == doctest::Approx(-kRt3).epsilon(1e-7));
}

TEST_CASE("determinant vanishes on the dispersion surfaces") {
  std::mt19937 rng(4);
  for (int i = 0; i < 200; ++i) {
    const WaveVector k = random_k(rng);
    const BranchFrequencies b = branch_frequencies(k);
    CHECK(std::abs(dispersion_determinant(b.Omega1, k)) < 1e-11);
    CHECK(std::abs(dispersion_determinant(b.Omega2, k)) < 1e-11);
  }
  CHECK(dispersion_determinant(0.0, {0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
  // Known saddle of the upper surface at omega = 2.25.
  CHECK(std::abs(dispersion_determinant(5.0625, {2.8909370, 2.0 * kPi / kRt3})) < 1e-9);
}

TEST_CASE("periodicity and reflection symmetry") {
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    const WaveVector k = random_k(rng);
    const BranchFrequencies base = branch_frequencies(k);
    for (const WaveVector shift : {WaveVector{k.kx + 4.0 * kPi, k.ky},
                                   WaveVector{k.kx, k.ky + 4.0 * kPi / kRt3}}) {
      const BranchFrequencies moved = branch_frequencies(shift);
      CHECK(std::abs(moved.omega1 - base.omega1) < 1e-12);
      CHECK(std::abs(moved.omega2 - base.omega2) < 1e-12);
    }
    for (double sx : {1.0, -1.0}) {
      for (double sy : {1.0, -1.0}) {
        const BranchFrequencies mirrored = branch_frequencies({sx * k.kx, sy * k.ky});
        CHECK(std::abs(mirrored.omega1 - base.omega1) < 1e-12);
        CHECK(std::abs(mirrored.omega2 - base.omega2) < 1e-12);
      }
    }
  }
}

TEST_CASE("radicand S is nonnegative; branch touchings") {
  std::mt19937 rng(6);
  for (int i = 0; i < 2000; ++i) CHECK(dispersion_parts(random_k(rng)).s >= 0.0);
  // Touchings at the origin and the cell corners...
  CHECK(dispersion_parts({0.0, 0.0}).s < 1e-15);
  CHECK(dispersion_parts({2.0 * kPi, 2.0 * kPi / kRt3}).s < 1e-13);
  // ...and conical contacts at (+-4pi/3, 0) and images, where both branches
  // meet at Omega = 4.5.
  CHECK(dispersion_parts({4.0 * kPi / 3.0, 0.0}).s < 1e-13);
  CHECK(branch_Omega(1, {4.0 * kPi / 3.0, 0.0}) == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(dispersion_parts({2.0 * kPi / 3.0, 2.0 * kPi / kRt3}).s < 1e-13);
}

TEST_CASE("adjugate identity: det B == Delta") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> omega2_dist(-2.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const WaveVector k = random_k(rng);
    const double Omega = omega2_dist(rng);
    const ComplianceNumerator b = compliance_numerator(Omega, k);
    const double delta = dispersion_determinant(Omega, k);
    const double scale = std::max({std::abs(delta), std::abs(b.xx * b.yy), 1.0});
    CHECK(std::abs(b.det() - delta) / scale < 1e-12);
  }
}

TEST_CASE("surface sampling") {
  CHECK_THROWS_AS(sample_surface(1, 1), ValidationError);
  CHECK_THROWS_AS(sample_surface(3, 32), ValidationError);

  const SurfaceGrid upper = sample_surface(1, 64);
  const SurfaceGrid lower = sample_surface(2, 64);
  double max_omega = 0.0;
  for (int iy = 0; iy < 64; ++iy) {
    for (int ix = 0; ix < 64; ++ix) {
      max_omega = std::max(max_omega, upper.at(ix, iy));
      CHECK(upper.at(ix, iy) >= lower.at(ix, iy));
    }
  }
  CHECK(max_omega <= std::sqrt(6.0) + 1e-12);
  CHECK(max_omega == doctest::Approx(std::sqrt(6.0)).epsilon(0.01 / std::sqrt(6.0)));

  // Both surfaces drop to zero at the cell corners.
  CHECK(upper.at(0, 0) < 1e-12);
  CHECK(lower.at(0, 0) < 1e-12);
  CHECK(lower.at(63, 63) < 1e-12);
}

TEST_CASE("isofrequency contours") {
  SUBCASE("above the global maximum: empty") {
    const IsoContour empty = isofrequency_contours(1, std::sqrt(6.0) + 0.1, 128);
    CHECK(empty.polylines.empty());
  }

  SUBCASE("slightly below the upper maximum: loops around each family") {
    const double omega = std::sqrt(6.0) - 0.02;
    const IsoContour contour = isofrequency_contours(1, omega, 512);
    CHECK(!contour.polylines.empty());
    CHECK(contour.tolerance < 5e-4);

    // Interior maxima at (+-pi, +-pi/sqrt3) must sit inside closed loops.
    auto encircles = [&](double px, double py) {
      for (const auto& line : contour.polylines) {
        if (line.size() < 4) continue;
        const bool closed = std::abs(line.front().kx - line.back().kx) < 1e-12 &&
                            std::abs(line.front().ky - line.back().ky) < 1e-12;
        if (!closed) continue;
        int crossings = 0;
        for (std::size_t i = 0; i + 1 < line.size(); ++i) {
          const WaveVector& a = line[i];
          const WaveVector& b = line[i + 1];
          if ((a.ky > py) == (b.ky > py)) continue;
          const double xc = a.kx + (py - a.ky) / (b.ky - a.ky) * (b.kx - a.kx);
          if (xc > px) ++crossings;
        }
        if (crossings % 2 == 1) return true;
      }
      return false;
    };
    for (double sx : {1.0, -1.0})
      for (double sy : {1.0, -1.0}) CHECK(encircles(sx * kPi, sy * kPi / kRt3));

    // Boundary maxima show up as nearby arcs cut by the cell edge.
    auto nearest_vertex = [&](double px, double py) {
      double best = 1e300;
      for (const auto& line : contour.polylines)
        for (const WaveVector& v : line)
          best = std::min(best, std::hypot(v.kx - px, v.ky - py));
      return best;
    };
    CHECK(nearest_vertex(0.0, 2.0 * kPi / kRt3) < 0.6);
    CHECK(nearest_vertex(2.0 * kPi, 0.0) < 0.6);
  }

  SUBCASE("lower surface at its saddle frequency passes through the saddles") {
    const IsoContour contour = isofrequency_contours(2, std::sqrt(2.0), 512);
    CHECK(!contour.polylines.empty());
    double best = 1e300;
    for (const auto& line : contour.polylines)
      for (const WaveVector& v : line)
        best = std::min(best, std::hypot(v.kx - kPi, v.ky - kPi / kRt3));
    CHECK(best < 0.05);
  }
}

TEST_CASE("non-resonant response in the stop band") {
  const double omega = 3.0;
  const Displacement2 P{1.0, 0.0};

  SUBCASE("zero force gives a zero field") {
    const Displacement2 g = nonresonant_green(omega, {}, {2, 1}, 64);
    CHECK(std::abs(g.x) == 0.0);
    CHECK(std::abs(g.y) == 0.0);
  }

  SUBCASE("quadrature convergence when doubling the order") {
    const Displacement2 coarse = nonresonant_green(omega, P, {3, 2}, 256);
    const Displacement2 fine = nonresonant_green(omega, P, {3, 2}, 512);
    const double diff = std::sqrt(norm2(fine - coarse));
    const double scale = std::sqrt(norm2(fine));
    CHECK(diff / scale < 1e-6);
  }

  SUBCASE("harmonic equations of motion hold off the source") {
    const double Omega = omega * omega;
    for (const NodeIndex idx : {NodeIndex{3, 1}, NodeIndex{-2, 4}}) {
      std::array<Displacement2, 6> nbr;
      for (std::size_t j = 0; j < 6; ++j) {
        const NodeIndex off = neighbor_offsets()[j];
        nbr[j] = nonresonant_green(omega, P, {idx.m + off.m, idx.n + off.n}, 384);
      }
      const Displacement2 uc = nonresonant_green(omega, P, idx, 384);
      const Displacement2 acc = acceleration(bond_forces(uc, nbr), {});
      const double residual = std::sqrt(norm2({acc.x + Omega * uc.x, acc.y + Omega * uc.y}));
      CHECK(residual < 1e-6);
    }
  }

  SUBCASE("amplitudes decay away from the source") {
    const double near = std::sqrt(norm2(nonresonant_green(omega, P, {1, 0}, 256)));
    const double mid = std::sqrt(norm2(nonresonant_green(omega, P, {4, 0}, 256)));
    const double far = std::sqrt(norm2(nonresonant_green(omega, P, {8, 0}, 256)));
    CHECK(near > mid);
    CHECK(mid > far);
  }

  SUBCASE("reciprocity: G(m,n) = G^T(-m,-n)") {
    const NodeIndex idx{4, -2};
    const NodeIndex YX{-4, 2};
    const Displacement2 gx = nonresonant_green(omega, {1.0, 0.0}, idx, 256);
    const Displacement2 gy = nonresonant_green(omega, {0.0, 1.0}, idx, 256);
    const Displacement2 hx = nonresonant_green(omega, {1.0, 0.0}, YX, 256);
    const Displacement2 hy = nonresonant_green(omega, {0.0, 1.0}, YX, 256);
    CHECK(std::abs(gx.y - hy.x) < 1e-10); // off-diagonal transpose pair
    CHECK(std::abs(gx.x - hx.x) < 1e-10);
    CHECK(std::abs(gy.y - hy.y) < 1e-10);
  }

  SUBCASE("in-band frequency trips the resonance floor") {
    CHECK_THROWS_AS(nonresonant_green(1.0, P, {0, 0}, 128), NumericalError);
  }
}
