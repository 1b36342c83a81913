#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftkit/stream.hpp"

namespace driftkit {

struct DriftSchedule {
  std::vector<std::size_t> drift_points;  // strictly increasing
  double noise = 0.0;                     // label-flip probability

  void validate(std::size_t length) const {
    if (noise < 0.0 || noise >= 0.5)
      throw std::invalid_argument("noise must be in [0, 0.5)");
    std::size_t prev = 0;
    bool first = true;
    for (std::size_t p : drift_points) {
      if (!first && p <= prev)
        throw std::invalid_argument("drift points must be strictly increasing");
      if (p >= length)
        throw std::invalid_argument("drift point beyond stream length");
      prev = p;
      first = false;
    }
  }
};

// Three uniform features on [0,10]; label 1 iff x1 + x2 <= theta.
// Theta advances through the configured sequence at each drift point.
class SeaSource : public StreamSource {
 public:
  static constexpr double kDefaultNoise = 0.10;

  SeaSource(std::uint64_t seed, std::size_t length, DriftSchedule schedule,
            std::vector<double> thetas = {8.0, 9.0, 7.0, 9.5})
      : rng_(seed), length_(length), schedule_(std::move(schedule)),
        thetas_(std::move(thetas)) {
    if (length_ < 1) throw std::invalid_argument("length must be >= 1");
    if (thetas_.empty()) throw std::invalid_argument("need at least one theta");
    schedule_.validate(length_);
  }

  std::optional<Instance> next() override {
    if (pos_ >= length_) return std::nullopt;
    if (drift_idx_ < schedule_.drift_points.size() &&
        pos_ == schedule_.drift_points[drift_idx_]) {
      ++drift_idx_;
      ++concept_;
    }
    Instance inst;
    inst.index = pos_;
    std::uniform_real_distribution<double> u(0.0, 10.0);
    inst.features = {u(rng_), u(rng_), u(rng_)};
    double theta = thetas_[concept_ % thetas_.size()];
    ClassId y = (inst.features[0] + inst.features[1] <= theta) ? 1 : 0;
    if (schedule_.noise > 0.0) {
      std::bernoulli_distribution flip(schedule_.noise);
      if (flip(rng_)) y = 1 - y;
    }
    inst.label = y;
    ++pos_;
    return inst;
  }

  std::size_t dimension() const override { return 3; }
  int num_classes() const override { return 2; }

 private:
  std::mt19937_64 rng_;
  std::size_t length_;
  DriftSchedule schedule_;
  std::vector<double> thetas_;
  std::size_t pos_ = 0;
  std::size_t drift_idx_ = 0;
  std::size_t concept_ = 0;
};

// d uniform features on [0,1]; label 1 iff w.x >= w0 with w0 = sum(w)/2.
// Each drift point redraws the weight vector (abrupt drift).
class HyperplaneSource : public StreamSource {
 public:
  static constexpr double kDefaultNoise = 0.05;

  HyperplaneSource(std::uint64_t seed, std::size_t length, std::size_t d,
                   DriftSchedule schedule)
      : rng_(seed), length_(length), d_(d), schedule_(std::move(schedule)) {
    if (length_ < 1) throw std::invalid_argument("length must be >= 1");
    if (d_ < 2) throw std::invalid_argument("need at least 2 dimensions");
    schedule_.validate(length_);
    redraw_weights();
  }

  std::optional<Instance> next() override {
    if (pos_ >= length_) return std::nullopt;
    if (drift_idx_ < schedule_.drift_points.size() &&
        pos_ == schedule_.drift_points[drift_idx_]) {
      ++drift_idx_;
      redraw_weights();
    }
    Instance inst;
    inst.index = pos_;
    inst.features.resize(d_);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double dot = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      inst.features[i] = u(rng_);
      dot += weights_[i] * inst.features[i];
    }
    ClassId y = (dot >= w0_) ? 1 : 0;
    if (schedule_.noise > 0.0) {
      std::bernoulli_distribution flip(schedule_.noise);
      if (flip(rng_)) y = 1 - y;
    }
    inst.label = y;
    ++pos_;
    return inst;
  }

  std::size_t dimension() const override { return d_; }
  int num_classes() const override { return 2; }

 private:
  void redraw_weights() {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    weights_.resize(d_);
    double sum = 0.0;
    for (auto& w : weights_) {
      w = u(rng_);
      sum += w;
    }
    w0_ = 0.5 * sum;
  }

  std::mt19937_64 rng_;
  std::size_t length_;
  std::size_t d_;
  DriftSchedule schedule_;
  std::vector<double> weights_;
  double w0_ = 0.0;
  std::size_t pos_ = 0;
  std::size_t drift_idx_ = 0;
};

// Materializes a labeled source into the shared CSV layout. %.17g keeps the
// doubles bit-exact on round trip.
inline std::size_t write_dataset(StreamSource& source, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  const std::size_t d = source.dimension();
  for (std::size_t i = 0; i < d; ++i) out << "f" << (i + 1) << ",";
  out << "label\n";
  char buf[40];
  std::size_t rows = 0;
  while (auto inst = source.next()) {
    if (!inst->label)
      throw std::runtime_error("write_dataset requires a labeled source");
    for (double v : inst->features) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ",";
    }
    out << *inst->label << "\n";
    ++rows;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
  return rows;
}

}  // namespace driftkit
