#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace s2s {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Argument in [0, 2pi), the branch used for points of an open sector
/// {0 < theta < omega}, omega up to 2pi.
inline double arg_sector(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += 2.0 * pi;
  return a;
}

/// log z on the sector branch (imaginary part in [0, 2pi)).
inline Complex log_sector(Complex z) {
  if (z == Complex{0.0, 0.0})
    throw std::invalid_argument("log_sector: z = 0");
  return {std::log(std::abs(z)), arg_sector(z)};
}

/// z^p on the sector branch, p real (fractional powers allowed).
inline Complex pow_sector(Complex z, double p) {
  if (z == Complex{0.0, 0.0}) {
    if (p > 0.0) return {0.0, 0.0};
    throw std::invalid_argument("pow_sector: 0 to a nonpositive power");
  }
  return std::exp(p * log_sector(z));
}

/// exp(w) - 1 without cancellation for small |w|.
inline Complex cexpm1(Complex w) {
  if (std::abs(w) > 1e-3) return std::exp(w) - 1.0;
  // w (1 + w/2 (1 + w/3 (1 + w/4 (1 + w/5)))), error ~ |w|^6 / 720
  Complex s = 1.0 + w / 5.0;
  s = 1.0 + w * s / 4.0;
  s = 1.0 + w * s / 3.0;
  s = 1.0 + w * s / 2.0;
  return w * s;
}

/// (z^a - z^b) / (a - b) on the sector branch; stable as a -> b
/// (limit z^b log z). Requires z != 0.
inline Complex divided_power(Complex z, double a, double b) {
  const Complex lg = log_sector(z);
  const Complex zb = std::exp(b * lg);
  const double d = a - b;
  if (d == 0.0) return zb * lg;
  return zb * cexpm1(d * lg) / d;
}

/// Real companion of divided_power for the scale factor family:
/// (e^a - e^b)/(a - b) for e in (0,1), continuous at a = b.
inline double divided_power_real(double e, double a, double b) {
  if (e <= 0.0) {
    if (e == 0.0 && a > 0.0 && b > 0.0) return 0.0;
    throw std::invalid_argument("divided_power_real: scale must be positive");
  }
  const double lg = std::log(e);
  const double eb = std::exp(b * lg);
  const double d = a - b;
  if (d == 0.0) return eb * lg;
  return eb * std::expm1(d * lg) / d;
}

struct GaussRule {
  std::vector<double> x;  // nodes on (-1, 1)
  std::vector<double> w;
};

/// Gauss-Legendre rule of order n (Newton on Legendre polynomials).
GaussRule gauss_legendre(int n);

/// Reflection across the horizontal axis.
inline Complex reflect(Complex z) { return std::conj(z); }

}  // namespace s2s
