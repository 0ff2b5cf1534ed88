#pragma once

// Test-only reference computations. Nothing here calls into the library's
// quadrature or closed forms, so they can serve as independent checks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>

namespace oracle {

constexpr double pi = std::numbers::pi;

/// Composite Simpson rule with n (even) subintervals.
template <class F>
auto simpson(F&& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  auto sum = f(a) + f(b);
  for (std::size_t k = 1; k < n; ++k) {
    const double w = (k % 2) ? 4.0 : 2.0;
    sum += w * f(a + h * static_cast<double>(k));
  }
  return sum * (h / 3.0);
}

/// Rectangular-pulse spectral amplitude from the time-domain integral
///   int_{-pi/Omega}^{0} cos(Omega t / 2) e^{-i Delta t} dt + 1/(gamma + i Delta)
/// in the stable form built from T e^{ikT/2} sinc(kT/2) with T = pi/Omega.
inline std::complex<double> rect_amplitude_sinc(double delta, double omega,
                                                double gamma = 1.0) {
  const double T = pi / omega;
  auto segment = [&](double k) {
    const double x = 0.5 * k * T;
    const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return T * std::polar(1.0, x) * sinc;
  };
  const auto pulse = 0.5 * (segment(delta - 0.5 * omega) + segment(delta + 0.5 * omega));
  return pulse + 1.0 / std::complex<double>(gamma, delta);
}

/// Dispersion of N |F|^2 from the time domain: F is the Fourier transform
/// of f(t) = i B(t), so int |F|^2 = 2 pi int f^2 and
/// int Delta^2 |F|^2 = 2 pi int f'^2 (the free-decay part is exponential).
/// `pulse` returns f and f' on the pulse; n Simpson intervals.
inline double parseval_dispersion(
    const std::function<std::pair<double, double>(double)>& pulse,
    double duration, double gamma, std::size_t n = 200000) {
  const double f2 = simpson([&](double t) { auto v = pulse(t); return v.first * v.first; },
                            -duration, 0.0, n) + 0.5 / gamma;
  const double fp2 = simpson([&](double t) { auto v = pulse(t); return v.second * v.second; },
                             -duration, 0.0, n) + 0.5 * gamma;
  return fp2 / f2;
}

/// Exact unit normalizer 1 / (2 pi int f^2) for a pi pulse of duration
/// theta (int over the pulse of sin^2(A/2) is theta/2 for both built-ins).
inline double exact_normalizer(double duration, double gamma = 1.0) {
  return 1.0 / (2.0 * pi * (0.5 * duration + 0.5 / gamma));
}

inline std::pair<double, double> rect_pulse(double t, double omega) {
  return {std::cos(0.5 * omega * t), -0.5 * omega * std::sin(0.5 * omega * t)};
}

inline std::pair<double, double> sine_pulse(double t, double omega) {
  const double area = 0.5 * pi * (std::cos(omega * t) + 1.0);
  const double rate = -0.5 * pi * omega * std::sin(omega * t);
  return {std::sin(0.5 * area), 0.5 * rate * std::cos(0.5 * area)};
}

}  // namespace oracle
