#pragma once

#include <cmath>
#include <stdexcept>

namespace driftkit {

// gamma = 50 * e^(-4 * alpha) + delta. Fewer labels -> larger gamma, pushing
// the error-rate function toward saturation so sparse-label noise does not
// read as drift.
inline double scaling_factor(double alpha, double delta = 0.0) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must be in (0, 1]");
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  return 50.0 * std::exp(-4.0 * alpha) + delta;
}

// (2/sqrt(pi)) * integral_0^x e^(-t^2) dt, kept strictly below 1 so the
// threshold partition stays exhaustive.
inline double error_rate(double x) {
  if (x < 0.0) throw std::invalid_argument("error_rate input must be >= 0");
  double e = std::erf(x);
  if (e >= 1.0) e = std::nextafter(1.0, 0.0);
  return e;
}

// Inverse of std::erf on [0, 1): initial guess plus Newton polish.
inline double erf_inv(double y) {
  if (y < 0.0 || y >= 1.0)
    throw std::invalid_argument("erf_inv input must be in [0, 1)");
  if (y == 0.0) return 0.0;
  const double a = 0.147;
  const double ln1 = std::log(1.0 - y * y);
  const double t = 2.0 / (M_PI * a) + 0.5 * ln1;
  double x = std::sqrt(std::sqrt(t * t - ln1 / a) - t);
  const double two_over_sqrt_pi = 1.1283791670955125739;
  for (int i = 0; i < 6; ++i) {
    const double err = std::erf(x) - y;
    const double deriv = two_over_sqrt_pi * std::exp(-x * x);
    if (deriv <= 0.0) break;
    x -= err / deriv;
  }
  return x;
}

}  // namespace driftkit
