#include "latwave/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latwave/errors.hpp"

namespace latwave {

namespace {

constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kPi = std::numbers::pi;
constexpr double kSwitch = 4.0; // series below, continued fraction above

// Power series: Si(x) = sum (-1)^k x^(2k+1) / ((2k+1)(2k+1)!),
//               Cin(x) = sum_{k>=1} (-1)^(k+1) x^(2k) / ((2k)(2k)!),
// with Ci(x) = gamma + ln x - Cin(x). Terms decay fast for |x| <= 4.
void si_cin_series(double x, double& si, double& cin) {
  si = x;
  cin = 0.0;
  const double x2 = x * x;
  double term_si = x;   // x^(2k+1)/(2k+1)!
  double term_ci = 1.0; // x^(2k)/(2k)!
  for (int k = 1; k <= 60; ++k) {
    term_ci *= x2 / ((2.0 * k - 1.0) * (2.0 * k));
    term_si *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
    const double dci = (k % 2 == 1 ? 1.0 : -1.0) * term_ci / (2.0 * k);
    const double dsi = (k % 2 == 1 ? -1.0 : 1.0) * term_si / (2.0 * k + 1.0);
    cin += dci;
    si += dsi;
    if (std::abs(dci) < 1e-18 * std::abs(cin) + 1e-300 &&
        std::abs(dsi) < 1e-18 * std::abs(si) + 1e-300)
      break;
  }
}

// E1(z) for z = i x, x > 0, by the even-contracted continued fraction
//   E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...)))
// evaluated with the modified Lentz algorithm. Accurate to ~1e-14 for
// |z| >= 4 on the imaginary axis (well away from the branch cut).
std::complex<double> e1_upper_imag_cf(double x) {
  const std::complex<double> z(0.0, x);
  const double tiny = 1e-300;
  std::complex<double> b = z + 1.0;
  std::complex<double> c = 1.0 / tiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> f = d;
  for (int k = 1; k <= 200; ++k) {
    const double a = -static_cast<double>(k) * k;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-z) * f;
}

} // namespace

double cosine_integral(double x) {
  if (!(x > 0.0)) throw ValidationError("cosine_integral: requires x > 0");
  if (x <= kSwitch) {
    double si, cin;
    si_cin_series(x, si, cin);
    return kEulerGamma + std::log(x) - cin;
  }
  // Ci(x) = -Re E1(ix)
  return -e1_upper_imag_cf(x).real();
}

double sine_integral(double x) {
  const double ax = std::abs(x);
  double si;
  if (ax <= kSwitch) {
    double cin;
    si_cin_series(ax, si, cin);
  } else {
    // Si(x) = pi/2 + Im E1(ix)
    si = kPi / 2.0 + e1_upper_imag_cf(ax).imag();
  }
  return x < 0.0 ? -si : si;
}

std::complex<double> e1_imag_axis(double r) {
  if (r == 0.0) throw ValidationError("e1_imag_axis: logarithmic singularity at r = 0");
  const double ar = std::abs(r);
  std::complex<double> value;
  if (ar <= kSwitch) {
    double si, cin;
    si_cin_series(ar, si, cin);
    const double ci = kEulerGamma + std::log(ar) - cin;
    value = {-ci, kPi / 2.0 - si};
  } else {
    value = std::conj(e1_upper_imag_cf(ar)); // E1(-i ar) = conj E1(i ar)
  }
  // value currently holds E1(-i ar); reflect for negative r.
  return r > 0.0 ? value : std::conj(value);
}

} // namespace latwave
