#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "driftkit/posterior.hpp"

namespace driftkit {

struct KernelDensityModel {
  std::vector<double> points;
  double bandwidth = 1.0;

  std::size_t size() const { return points.size(); }
};

// Gaussian-kernel KDE over a standardized sample. Silverman's rule with unit
// std gives h = 1.06 * m^(-1/5).
inline KernelDensityModel fit_kde(const std::vector<double>& standardized) {
  if (standardized.empty())
    throw std::invalid_argument("cannot fit a KDE on an empty sample");
  KernelDensityModel m;
  m.points = standardized;
  m.bandwidth =
      1.06 * std::pow(static_cast<double>(standardized.size()), -0.2);
  return m;
}

inline KernelDensityModel fit_kde(const PosteriorSample& sample) {
  return fit_kde(sample.standardized);
}

inline double kde_density(const KernelDensityModel& m, double x) {
  if (m.points.empty()) throw std::invalid_argument("KDE not fitted");
  const double inv_h = 1.0 / m.bandwidth;
  double sum = 0.0;
  for (double p : m.points) {
    const double u = (x - p) * inv_h;
    sum += std::exp(-0.5 * u * u);
  }
  constexpr double inv_sqrt_2pi = 0.3989422804014326779;
  return sum * inv_sqrt_2pi * inv_h / static_cast<double>(m.points.size());
}

// log of kde_density, stable when every kernel contribution underflows.
inline double kde_log_density(const KernelDensityModel& m, double x) {
  if (m.points.empty()) throw std::invalid_argument("KDE not fitted");
  const double inv_h = 1.0 / m.bandwidth;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> exponents;
  exponents.reserve(m.points.size());
  for (double p : m.points) {
    const double u = (x - p) * inv_h;
    exponents.push_back(-0.5 * u * u);
    if (exponents.back() > best) best = exponents.back();
  }
  if (!std::isfinite(best)) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double e : exponents) sum += std::exp(e - best);
  constexpr double log_sqrt_2pi = 0.91893853320467274178;
  return best + std::log(sum) - log_sqrt_2pi -
         std::log(m.bandwidth * static_cast<double>(m.points.size()));
}

}  // namespace driftkit
