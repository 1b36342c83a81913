#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "driftkit/hoeffding.hpp"
#include "driftkit/kde.hpp"
#include "driftkit/knowledge.hpp"
#include "driftkit/posterior.hpp"
#include "driftkit/scaling.hpp"
#include "driftkit/stats.hpp"
#include "driftkit/stream.hpp"

namespace driftkit {

enum class DriftState { Stable, Warning, Drift };

inline const char* to_string(DriftState s) {
  switch (s) {
    case DriftState::Stable: return "stable";
    case DriftState::Warning: return "warning";
    case DriftState::Drift: return "drift";
  }
  return "?";
}

enum class SampleMode { per_attribute, joint };
enum class DensityMean { arithmetic, geometric };

struct DetectorConfig {
  double tau = 0.05;   // drift threshold
  double phi = 0.1;    // warning threshold
  double delta = 0.0;  // sensitivity offset added to gamma
  double alpha = 1.0;  // label fraction, drives gamma
  std::size_t min_rl = 10;
  double var_floor = 1e-9;

  // Density-deficit gate: how far below the recent stable level the window's
  // mean density must fall, in reference-noise units, to count as suspect.
  double warn_z = 1.25;
  double drift_z = 3.0;
  double sigma_floor = 0.02;  // fraction of the reference mean
  std::size_t ref_len = 10;
  std::size_t min_ref = 5;
  std::size_t escalate_after = 3;  // consecutive suspect windows -> drift

  SampleMode sample_mode = SampleMode::joint;
  DensityMean density_mean = DensityMean::geometric;
  std::size_t static_min_fit = 8000;  // replay target for the static fit
  HoeffdingParams tree;
  std::optional<double> force_gamma;  // overrides scaling_factor(alpha, delta)

  void validate() const {
    if (!(tau > 0.0 && tau < phi && phi < 1.0))
      throw std::invalid_argument("need 0 < tau < phi < 1");
    if (!(alpha > 0.0) || alpha > 1.0)
      throw std::invalid_argument("alpha must be in (0, 1]");
    if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
    if (!(warn_z >= 0.0 && warn_z < drift_z))
      throw std::invalid_argument("need 0 <= warn_z < drift_z");
    if (sigma_floor <= 0.0) throw std::invalid_argument("sigma_floor must be > 0");
    if (min_ref < 2 || ref_len < min_ref)
      throw std::invalid_argument("need ref_len >= min_ref >= 2");
    if (escalate_after < 1)
      throw std::invalid_argument("escalate_after must be >= 1");
  }
};

struct DriftVerdict {
  DriftState state = DriftState::Stable;
  std::optional<double> epsilon;  // absent when detection was skipped
  std::size_t window_end_index = 0;
  double rho = 0.0;      // mean incremental-sample density
  double deficit = 0.0;  // z-score of rho below the stable reference
  bool detection_skipped = false;
  bool bootstrap = false;
};

// Per-window drift detector. Each window yields a static estimator fitted on
// the reliable labels; the running incremental estimator's predictions are
// scored under a KDE of the static posterior sample. A collapse of that
// density relative to recent stable windows drives epsilon below the
// thresholds: Drift replaces the incremental estimator with the static one,
// Warning freezes it, Stable trains it further.
class DensityDriftDetector {
 public:
  DensityDriftDetector(std::size_t dim, int num_classes,
                       DetectorConfig cfg = {})
      : d_(dim), nc_(num_classes), cfg_(cfg),
        incremental_(dim, num_classes, cfg.tree) {
    cfg_.validate();
  }

  DriftVerdict process_window(const Window& w, const ReliableLabeledSet& rl) {
    DriftVerdict v;
    v.window_end_index = w.end_index;

    std::vector<std::vector<double>> X;
    std::vector<ClassId> y;
    if (!rl.empty()) {
      std::tie(X, y) = rl.xy();
      auto fresh = std::make_unique<HoeffdingTree>(d_, nc_, cfg_.tree);
      fresh->train_replayed(X, y, cfg_.static_min_fit);
      static_ = std::move(fresh);
    }

    auto model = fit_posterior_model(rl, cfg_.min_rl, cfg_.var_floor);
    PosteriorSample ref_sample;
    bool usable = model.has_value();
    if (usable) {
      ref_sample = sample_of(*model, instances_of(rl), labels_of(rl));
      usable = !ref_sample.zero_std;
    }

    if (!incremental_trained_) {
      if (static_) {
        incremental_ = *static_;
        incremental_trained_ = true;
        v.bootstrap = true;
      }
      v.detection_skipped = true;
      history_.push_back(v);
      return v;
    }

    if (!usable) {
      if (!X.empty()) incremental_.train_batch(X, y);
      v.detection_skipped = true;
      history_.push_back(v);
      return v;
    }

    // incremental path: score the running model's predictions under the
    // static sample's density, on the static sample's standardization axis
    std::vector<ClassId> predicted;
    predicted.reserve(w.size());
    for (const Instance& inst : w.instances)
      predicted.push_back(incremental_.predict(inst.features));
    const std::vector<double> raw = raw_values(*model, w.instances, predicted);
    const std::vector<double> z_points =
        standardize_with(raw, ref_sample.mean, ref_sample.stddev);

    const KernelDensityModel kde = fit_kde(ref_sample);
    v.rho = mean_density(kde, z_points);
    v.deficit = density_deficit(v.rho);

    const double gamma = cfg_.force_gamma
                             ? *cfg_.force_gamma
                             : scaling_factor(cfg_.alpha, cfg_.delta);
    double x;
    if (v.deficit >= cfg_.drift_z) {
      x = 0.0;
    } else if (v.deficit > cfg_.warn_z) {
      ++warn_streak_;
      if (warn_streak_ >= cfg_.escalate_after) {
        x = 0.0;
      } else {
        const double frac =
            (cfg_.drift_z - v.deficit) / (cfg_.drift_z - cfg_.warn_z);
        x = erf_inv(cfg_.tau) + (erf_inv(cfg_.phi) - erf_inv(cfg_.tau)) * frac;
      }
    } else {
      warn_streak_ = 0;
      x = gamma * v.rho;
    }
    const double eps = error_rate(x);
    v.epsilon = eps;

    if (eps < cfg_.tau) {
      v.state = DriftState::Drift;
      incremental_ = *static_;
      reference_.clear();
      warn_streak_ = 0;
    } else if (eps < cfg_.phi) {
      v.state = DriftState::Warning;  // freeze: no training this window
    } else {
      v.state = DriftState::Stable;
      incremental_.train_batch(X, y);
      reference_.push_back(v.rho);
      while (reference_.size() > cfg_.ref_len) reference_.pop_front();
    }
    history_.push_back(v);
    return v;
  }

  const HoeffdingTree& incremental() const { return incremental_; }
  const HoeffdingTree* last_static() const { return static_.get(); }
  bool ready() const { return incremental_trained_; }
  const std::vector<DriftVerdict>& history() const { return history_; }
  const DetectorConfig& config() const { return cfg_; }
  std::size_t dimension() const { return d_; }
  int num_classes() const { return nc_; }

 private:
  static std::vector<Instance> instances_of(const ReliableLabeledSet& rl) {
    std::vector<Instance> out;
    out.reserve(rl.size());
    for (const auto& e : rl.entries) out.push_back(e.instance);
    return out;
  }
  static std::vector<ClassId> labels_of(const ReliableLabeledSet& rl) {
    std::vector<ClassId> out;
    out.reserve(rl.size());
    for (const auto& e : rl.entries) out.push_back(e.label);
    return out;
  }

  PosteriorSample sample_of(const PosteriorModel& m,
                            const std::vector<Instance>& insts,
                            const std::vector<ClassId>& labels) const {
    return cfg_.sample_mode == SampleMode::joint
               ? compute_joint_posterior_sample(m, insts, labels)
               : compute_posterior_sample(m, insts, labels);
  }

  std::vector<double> raw_values(const PosteriorModel& m,
                                 const std::vector<Instance>& insts,
                                 const std::vector<ClassId>& labels) const {
    std::vector<double> out;
    if (cfg_.sample_mode == SampleMode::joint) {
      out.reserve(insts.size());
      for (std::size_t j = 0; j < insts.size(); ++j)
        out.push_back(m.joint_posterior(insts[j].features, labels[j]));
    } else {
      out.reserve(insts.size() * m.d);
      for (std::size_t j = 0; j < insts.size(); ++j)
        for (std::size_t i = 0; i < m.d; ++i)
          out.push_back(m.posterior(i, insts[j].features[i], labels[j]));
    }
    return out;
  }

  double mean_density(const KernelDensityModel& kde,
                      const std::vector<double>& pts) const {
    if (pts.empty()) return 0.0;
    if (cfg_.density_mean == DensityMean::arithmetic) {
      double s = 0.0;
      for (double p : pts) s += kde_density(kde, p);
      return s / static_cast<double>(pts.size());
    }
    double s = 0.0;
    for (double p : pts)
      s += std::max(kde_log_density(kde, p), -700.0);
    return std::exp(s / static_cast<double>(pts.size()));
  }

  double density_deficit(double rho) const {
    if (reference_.size() < cfg_.min_ref) return 0.0;
    RunningStats rs;
    for (double r : reference_) rs.add(r);
    const double sigma =
        std::max(rs.stddev(), cfg_.sigma_floor * rs.mean());
    if (!(sigma > 0.0)) return 0.0;
    return std::max(0.0, (rs.mean() - rho) / sigma);
  }

  std::size_t d_;
  int nc_;
  DetectorConfig cfg_;
  HoeffdingTree incremental_;
  std::unique_ptr<HoeffdingTree> static_;
  bool incremental_trained_ = false;
  std::deque<double> reference_;  // rho of recent stable windows
  std::size_t warn_streak_ = 0;
  std::vector<DriftVerdict> history_;
};

}  // namespace driftkit
