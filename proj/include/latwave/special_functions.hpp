#pragma once

#include <complex>

namespace latwave {

/// Cosine integral Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt, x > 0.
double cosine_integral(double x);

/// Sine integral Si(x) = int_0^x sin(t)/t dt, odd in x.
double sine_integral(double x);

/// Exponential integral E1 evaluated on the negative imaginary axis,
/// E1(-i r) = -Ci(|r|) - i (Si(r) - (pi/2) sign r), r != 0.
/// Small |r|: -ln|r| - gamma + i (pi/2) sign r + O(r).
std::complex<double> e1_imag_axis(double r);

} // namespace latwave
