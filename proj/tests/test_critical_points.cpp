#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "latwave/critical_points.hpp"
#include "latwave/errors.hpp"
#include "oracles.hpp"

using namespace latwave;

namespace {
constexpr double kPi = std::numbers::pi;
const double kRt3 = std::numbers::sqrt3;

// Printed reference coordinates of the standing-wave families (first
// quadrant) with their frequency group.
struct Family {
  const char* label;
  int branch;
  double kx, ky, omega;
};
const Family kFamilies[] = {
    {"11", 1, 0.0, 3.6275987, 2.4494897}, {"12", 1, 6.2831853, 0.0, 2.4494897},
    {"13", 1, 3.1415927, 1.8137994, 2.4494897}, {"21", 1, 2.8909370, 3.6275987, 2.25},
    {"22", 1, 3.3922483, 0.0, 2.25}, {"23", 1, 1.6961242, 2.9377732, 2.25},
    {"24", 1, 4.5870611, 0.6898255, 2.25}, {"31", 2, 0.0, 3.6275987, 1.4142136},
    {"32", 2, 6.2831853, 0.0, 1.4142136}, {"33", 2, 3.1415927, 1.8137994, 1.4142136},
};

const CensusReport& census(int branch) {
  static const CensusReport one = find_critical_points(1);
  static const CensusReport two = find_critical_points(2);
  return branch == 1 ? one : two;
}

const CriticalPoint& first_quadrant_point(const char* label) {
  for (int branch : {1, 2}) {
    for (const CriticalPoint& cp : census(branch).points) {
      if (cp.label != label) continue;
      if (cp.k.kx >= -1e-12 && cp.k.ky >= -1e-12) return cp;
    }
  }
  throw std::runtime_error("family not found in census");
}
} // namespace

TEST_CASE("analytic gradient vanishes at standing-wave points") {
  for (const WaveVector k : {WaveVector{2.0 * kPi, 0.0}, WaveVector{kPi, kPi / kRt3}}) {
    double gx, gy;
    gradient_Omega(1, k, gx, gy);
    CHECK(std::hypot(gx, gy) < 1e-12);
  }
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> dx(-2.0 * kPi, 2.0 * kPi);
  std::uniform_real_distribution<double> dy(-2.0 * kPi / kRt3, 2.0 * kPi / kRt3);
  int tested = 0;
  while (tested < 60) {
    const WaveVector k{dx(rng), dy(rng)};
    if (dispersion_parts(k).s < 1e-3) continue;
    for (int branch : {1, 2}) {
      double gx, gy, fx, fy;
      gradient_Omega(branch, k, gx, gy);
      oracles::fd_gradient_Omega(branch, k, 1e-5, fx, fy);
      CHECK(std::abs(gx - fx) < 1e-7);
      CHECK(std::abs(gy - fy) < 1e-7);
    }
    ++tested;
  }
}

TEST_CASE("gradient refuses branch touchings") {
  double gx, gy;
  CHECK_THROWS_AS(gradient_Omega(1, {4.0 * kPi / 3.0, 0.0}, gx, gy), NumericalError);
  CHECK_THROWS_AS(gradient_Omega(2, {0.0, 0.0}, gx, gy), NumericalError);
}

TEST_CASE("census counts: 8 / 14 / 8 by frequency group") {
  auto count_at = [&](int branch, double omega) {
    int n = 0;
    for (const CriticalPoint& cp : census(branch).points)
      if (std::abs(cp.omega_star - omega) < 1e-9) ++n;
    return n;
  };
  CHECK(count_at(1, std::sqrt(6.0)) == 8);
  CHECK(count_at(1, 2.25) == 14);
  CHECK(count_at(2, std::sqrt(2.0)) == 8);
  CHECK(census(1).points.size() == 22);
  CHECK(census(2).points.size() == 8);
  // Nothing dropped silently: every seed is accounted for.
  for (int branch : {1, 2}) {
    const CensusReport& rep = census(branch);
    CHECK(rep.converged + rep.hit_degenerate + rep.failed >= rep.seeds);
  }
}

TEST_CASE("census coordinates and labels match the reference families") {
  for (const Family& fam : kFamilies) {
    const CriticalPoint& cp = first_quadrant_point(fam.label);
    CHECK(cp.branch == fam.branch);
    CHECK(std::abs(cp.k.kx - fam.kx) < 1e-5);
    CHECK(std::abs(cp.k.ky - fam.ky) < 1e-5);
    CHECK(std::abs(cp.omega_star - fam.omega) < 1e-6);
  }
  // Exact frequencies to full precision.
  CHECK(first_quadrant_point("11").omega_star == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));
  CHECK(first_quadrant_point("21").omega_star == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(first_quadrant_point("33").omega_star == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // The interior upper-branch family sits exactly at ky = pi/sqrt(3).
  CHECK(std::abs(first_quadrant_point("13").k.ky - kPi / kRt3) < 1e-9);
}

TEST_CASE("every census point satisfies the gradient tolerance") {
  for (int branch : {1, 2}) {
    for (const CriticalPoint& cp : census(branch).points) {
      double gx, gy;
      gradient_Omega(branch, cp.k, gx, gy);
      CHECK(std::hypot(gx, gy) < 1e-8);
    }
  }
}

TEST_CASE("classification by Hessian signature") {
  CHECK(first_quadrant_point("11").klass == PointClass::maximum);
  CHECK(first_quadrant_point("13").klass == PointClass::maximum);
  CHECK(first_quadrant_point("21").klass == PointClass::saddle);
  CHECK(first_quadrant_point("33").klass == PointClass::saddle);
  CHECK(classify({1.0, 2.0, 0.5}) == PointClass::minimum);
  CHECK_THROWS_AS(classify({0.0, 0.0, 0.0}), NumericalError);
  // Saddle test c^2 - 4ab > 0 for the hyperbolic families, < 0 for maxima.
  for (const char* label : {"21", "22", "23", "24", "31", "32", "33"})
    CHECK(first_quadrant_point(label).quad.discriminant() > 0.0);
  for (const char* label : {"11", "12", "13"})
    CHECK(first_quadrant_point(label).quad.discriminant() < 0.0);
}

TEST_CASE("quadratic coefficients reproduce the reference values") {
  struct Row {
    const char* label;
    double a, b, c;
  };
  const Row rows[] = {
      {"11", -0.375, -1.125, 0.0},          {"12", -0.375, -1.125, 0.0},
      {"13", -0.9375, -0.5625, -0.649519},  {"21", -0.984375, 1.265625, 0.0},
      {"22", -0.984375, 1.265625, 0.0},     {"23", 0.703125, -0.421875, -1.94856},
      {"24", 0.703125, -0.421875, -1.94856},{"31", 0.875, -0.375, 0.0},
      {"32", 0.875, -0.375, 0.0},           {"33", -0.0625, 0.5625, -1.082532},
  };
  for (const Row& row : rows) {
    const QuadCoeffs q = first_quadrant_point(row.label).quad;
    CHECK(std::abs(q.a - row.a) < 1e-5);
    CHECK(std::abs(q.b - row.b) < 1e-5);
    CHECK(std::abs(q.c - row.c) < 1e-5);
  }
}

TEST_CASE("quadratic coefficients agree across step sizes") {
  for (const char* label : {"13", "23", "33"}) {
    const CriticalPoint& cp = first_quadrant_point(label);
    const QuadCoeffs q1 = quad_coeffs(cp.branch, cp.k, 1e-3);
    const QuadCoeffs q2 = quad_coeffs(cp.branch, cp.k, 2e-3);
    CHECK(std::abs(q1.a - q2.a) < 1e-6);
    CHECK(std::abs(q1.b - q2.b) < 1e-6);
    CHECK(std::abs(q1.c - q2.c) < 1e-6);
  }
  // An absurd agreement demand must be reported, not fudged.
  const CriticalPoint& cp = first_quadrant_point("33");
  CHECK_THROWS_AS(quad_coeffs(cp.branch, cp.k, 1e-3, 1e-18), NumericalError);
}

TEST_CASE("characteristic fans") {
  const double lambda3 = 0.46755781;
  SUBCASE("symmetric saddle (c = 0)") {
    const CharacteristicFan fan = characteristic_fan({0.875, -0.375, 0.0});
    REQUIRE(fan.angles.size() == 4);
    std::vector<double> expect = {-(2.0 * kPi / 3.0 + lambda3), -(kPi / 3.0 - lambda3),
                                  kPi / 3.0 - lambda3, 2.0 * kPi / 3.0 + lambda3};
    for (std::size_t i = 0; i < expect.size(); ++i)
      CHECK(std::abs(fan.angles[i] - expect[i]) < 1e-6);
  }
  SUBCASE("tilted saddle with mirror") {
    const CharacteristicFan fan = characteristic_fan({-0.0625, 0.5625, -1.082532}, true);
    REQUIRE(fan.angles.size() == 8);
    std::vector<double> expect = {-(kPi - lambda3), -(2.0 * kPi / 3.0 - lambda3),
                                  -(kPi / 3.0 + lambda3), -lambda3, lambda3,
                                  kPi / 3.0 + lambda3, 2.0 * kPi / 3.0 - lambda3,
                                  kPi - lambda3};
    for (std::size_t i = 0; i < expect.size(); ++i)
      CHECK(std::abs(fan.angles[i] - expect[i]) < 1e-6);
  }
  SUBCASE("elliptic point: empty fan") {
    const CharacteristicFan fan = characteristic_fan({-0.375, -1.125, 0.0});
    CHECK(fan.angles.empty());
    CHECK(fan.slopes.empty());
  }
  SUBCASE("a = 0 rejected") {
    CHECK_THROWS_AS(characteristic_fan({0.0, 1.0, 1.0}), ValidationError);
  }
}

TEST_CASE("star directions") {
  const double lambda2 = 0.19913547;
  const double lambda3 = 0.46755781;

  auto expect_set = [&](double lambda) {
    std::vector<double> set;
    for (int n = 0; n < 6; ++n) {
      for (double sign : {1.0, -1.0}) {
        double alpha = sign * lambda + kPi * n / 3.0;
        while (alpha > kPi) alpha -= 2.0 * kPi;
        while (alpha <= -kPi) alpha += 2.0 * kPi;
        set.push_back(alpha);
      }
    }
    std::sort(set.begin(), set.end());
    return set;
  };

  SUBCASE("saddle resonances carry the full 12-ray unions") {
    for (auto [res, lambda] : {std::pair<int, double>{2, lambda2}, {3, lambda3}}) {
      const std::vector<double> got = star_directions(res, census(resonance_branch(res)));
      const std::vector<double> want = expect_set(lambda);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-6);
      // Hexagonal symmetry: closed under alpha -> alpha + pi/3 and alpha -> -alpha.
      for (double alpha : got) {
        double rot = alpha + kPi / 3.0;
        if (rot > kPi) rot -= 2.0 * kPi;
        bool has_rot = false, has_neg = false;
        for (double beta : got) {
          has_rot = has_rot || std::abs(beta - rot) < 1e-9;
          has_neg = has_neg || std::abs(beta + alpha) < 1e-9 ||
                    (std::abs(alpha - kPi) < 1e-9 && std::abs(beta - kPi) < 1e-9);
        }
        CHECK(has_rot);
        CHECK(has_neg);
      }
    }
  }

  SUBCASE("maximum-only resonance has no rays") {
    CHECK(star_directions(1, census(1)).empty());
  }
}
