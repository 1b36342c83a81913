#pragma once

#include <cmath>
#include <cstddef>

namespace driftkit {

// Single-pass mean/variance (Welford). Stable over long streams.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }

  // Sample variance (ddof=1). Zero until two points seen.
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  // Population variance (ddof=0).
  double variance_population() const {
    return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0;
  }
  double stddev() const { return std::sqrt(variance()); }

  void reset() { n_ = 0; mean_ = 0.0; m2_ = 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace driftkit
