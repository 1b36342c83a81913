#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "driftkit/detector.hpp"
#include "driftkit/stats.hpp"

namespace driftkit {

// ---------------------------------------------------------------------------
// DDM: error rate p with binomial std s; drift when p+s climbs three minimum
// stds above the best level seen.

struct DdmParams {
  std::size_t min_instances = 30;
  double warn_factor = 2.0;
  double drift_factor = 3.0;
};

class DdmDetector {
 public:
  explicit DdmDetector(DdmParams params = {}) : p_(params) { reset(); }

  DriftState update(int error_bit) {
    if (error_bit != 0 && error_bit != 1)
      throw std::invalid_argument("error bit must be 0 or 1");
    ++n_;
    errors_ += error_bit;
    state_ = DriftState::Stable;
    if (n_ < p_.min_instances) return state_;
    const double p = static_cast<double>(errors_) / static_cast<double>(n_);
    const double s = std::sqrt(p * (1.0 - p) / static_cast<double>(n_));
    if (p + s < p_min_ + s_min_) {
      p_min_ = p;
      s_min_ = s;
    }
    if (p + s > p_min_ + p_.drift_factor * s_min_) {
      state_ = DriftState::Drift;
      reset();
    } else if (p + s > p_min_ + p_.warn_factor * s_min_) {
      state_ = DriftState::Warning;
    }
    return state_;
  }

  void reset() {
    n_ = 0;
    errors_ = 0;
    p_min_ = std::numeric_limits<double>::infinity();
    s_min_ = 0.0;
  }

  DriftState state() const { return state_; }
  double error_rate() const {
    return n_ ? static_cast<double>(errors_) / static_cast<double>(n_) : 0.0;
  }
  std::size_t seen() const { return n_; }

 private:
  DdmParams p_;
  std::size_t n_ = 0, errors_ = 0;
  double p_min_ = std::numeric_limits<double>::infinity();
  double s_min_ = 0.0;
  DriftState state_ = DriftState::Stable;
};

inline DriftState ddm_update(DdmDetector& d, int error_bit) {
  return d.update(error_bit);
}

// ---------------------------------------------------------------------------
// EDDM: watches the distance between consecutive errors; shrinking gaps pull
// (p'+2s') below its historical maximum.

struct EddmParams {
  std::size_t min_errors = 30;
  double warning_ratio = 0.95;
  double drift_ratio = 0.90;
};

class EddmDetector {
 public:
  explicit EddmDetector(EddmParams params = {}) : p_(params) {}

  DriftState update(int error_bit) {
    if (error_bit != 0 && error_bit != 1)
      throw std::invalid_argument("error bit must be 0 or 1");
    ++n_;
    state_ = DriftState::Stable;
    if (!error_bit) return state_;
    ++errors_;
    if (last_error_at_ > 0)
      gaps_.add(static_cast<double>(n_ - last_error_at_));
    last_error_at_ = n_;
    if (gaps_.count() == 0) return state_;

    const double level = gaps_.mean() + 2.0 * gaps_.stddev();
    if (level > max_level_) max_level_ = level;
    if (errors_ < p_.min_errors || max_level_ <= 0.0) return state_;

    const double ratio = level / max_level_;
    if (ratio < p_.drift_ratio) {
      state_ = DriftState::Drift;
      reset();
    } else if (ratio < p_.warning_ratio) {
      state_ = DriftState::Warning;
    }
    return state_;
  }

  void reset() {
    n_ = 0;
    errors_ = 0;
    last_error_at_ = 0;
    gaps_.reset();
    max_level_ = 0.0;
  }

  DriftState state() const { return state_; }
  std::size_t errors_seen() const { return errors_; }

 private:
  EddmParams p_;
  std::size_t n_ = 0, errors_ = 0, last_error_at_ = 0;
  RunningStats gaps_;
  double max_level_ = 0.0;
  DriftState state_ = DriftState::Stable;
};

inline DriftState eddm_update(EddmDetector& d, int error_bit) {
  return d.update(error_bit);
}

// ---------------------------------------------------------------------------
// ADWIN: adaptive window with exponential-histogram compression. Buckets in
// row r hold 2^r values; within a row the front is newest. When any split of
// the window into old|recent halves shows means further apart than the cut
// bound, the oldest bucket is dropped and drift is reported.

struct AdwinParams {
  double delta = 0.002;
  std::size_t max_buckets = 5;  // per row, before two oldest merge upward
  std::size_t min_window = 10;
  std::size_t min_sub = 5;
};

class AdwinDetector {
 public:
  explicit AdwinDetector(AdwinParams params = {}) : p_(params) {
    rows_.emplace_back();
  }

  DriftState update(double value) {
    insert(value);
    compress();
    state_ = shrink() ? DriftState::Drift : DriftState::Stable;
    return state_;
  }

  static double cut_bound(double n0, double n1, double window, double delta) {
    const double m = 1.0 / (1.0 / n0 + 1.0 / n1);  // harmonic mean
    return std::sqrt(std::log(4.0 * window / delta) / (2.0 * m));
  }

  DriftState state() const { return state_; }
  std::size_t window_size() const { return total_; }
  double window_sum() const { return sum_; }
  double mean() const {
    return total_ ? sum_ / static_cast<double>(total_) : 0.0;
  }

 private:
  void insert(double value) {
    rows_.front().push_front(value);
    ++total_;
    sum_ += value;
  }

  void compress() {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].size() <= p_.max_buckets) break;
      if (r + 1 == rows_.size()) rows_.emplace_back();
      const double merged = rows_[r].back() + rows_[r][rows_[r].size() - 2];
      rows_[r].pop_back();
      rows_[r].pop_back();
      rows_[r + 1].push_front(merged);
    }
  }

  void drop_oldest() {
    for (std::size_t r = rows_.size(); r-- > 0;) {
      if (rows_[r].empty()) continue;
      sum_ -= rows_[r].back();
      total_ -= std::size_t{1} << r;
      rows_[r].pop_back();
      while (rows_.size() > 1 && rows_.back().empty()) rows_.pop_back();
      return;
    }
  }

  bool violation_found() const {
    double n0 = 0.0, s0 = 0.0;
    const auto w = static_cast<double>(total_);
    for (std::size_t r = rows_.size(); r-- > 0;) {
      for (std::size_t b = rows_[r].size(); b-- > 0;) {
        n0 += static_cast<double>(std::size_t{1} << r);
        s0 += rows_[r][b];
        const double n1 = w - n0;
        if (n1 <= 0.0) return false;
        if (n0 < static_cast<double>(p_.min_sub) ||
            n1 < static_cast<double>(p_.min_sub))
          continue;
        const double gap = std::fabs(s0 / n0 - (sum_ - s0) / n1);
        if (gap > cut_bound(n0, n1, w, p_.delta)) return true;
      }
    }
    return false;
  }

  bool shrink() {
    bool shrunk = false;
    while (total_ >= p_.min_window && violation_found()) {
      drop_oldest();
      shrunk = true;
    }
    return shrunk;
  }

  AdwinParams p_;
  std::vector<std::deque<double>> rows_;  // rows_[r]: bucket sums of 2^r values
  std::size_t total_ = 0;
  double sum_ = 0.0;
  DriftState state_ = DriftState::Stable;
};

inline DriftState adwin_update(AdwinDetector& d, double value) {
  return d.update(value);
}

// ---------------------------------------------------------------------------
// Page-Hinkley: cumulative deviation from the running mean versus its minimum.

struct PageHinkleyParams {
  double lambda = 50.0;
  double delta = 0.005;
};

class PageHinkleyDetector {
 public:
  explicit PageHinkleyDetector(PageHinkleyParams params = {}) : p_(params) {}

  DriftState update(double value) {
    ++n_;
    mean_ += (value - mean_) / static_cast<double>(n_);
    m_t_ += value - mean_ - p_.delta;
    min_m_ = std::min(min_m_, m_t_);
    state_ = DriftState::Stable;
    if (m_t_ - min_m_ > p_.lambda) {
      state_ = DriftState::Drift;
      reset();
    }
    return state_;
  }

  void reset() {
    n_ = 0;
    mean_ = 0.0;
    m_t_ = 0.0;
    min_m_ = std::numeric_limits<double>::infinity();
  }

  DriftState state() const { return state_; }
  double cumulative() const { return m_t_; }
  double minimum() const { return min_m_; }

 private:
  PageHinkleyParams p_;
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m_t_ = 0.0;
  double min_m_ = std::numeric_limits<double>::infinity();
  DriftState state_ = DriftState::Stable;
};

inline DriftState ph_update(PageHinkleyDetector& d, double value) {
  return d.update(value);
}

}  // namespace driftkit
