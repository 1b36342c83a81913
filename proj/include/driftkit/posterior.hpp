#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "driftkit/knowledge.hpp"
#include "driftkit/stats.hpp"
#include "driftkit/stream.hpp"

namespace driftkit {

// Class-conditional Gaussians per attribute plus class priors. Supports both
// the per-attribute posterior p(y|x_i) and the joint naive-Bayes posterior
// p(y|x) of an instance's assigned label.
struct PosteriorModel {
  std::size_t d = 0;
  int nc = 0;
  std::vector<double> mean;   // class-major: [c * d + i]
  std::vector<double> var;    // floored, same layout
  std::vector<double> prior;  // per class, sums to 1
  double var_floor = 1e-9;

  double log_likelihood(int c, std::size_t attr, double x) const {
    const double m = mean[static_cast<std::size_t>(c) * d + attr];
    const double v = var[static_cast<std::size_t>(c) * d + attr];
    const double z = x - m;
    return -0.5 * (std::log(2.0 * M_PI * v) + z * z / v);
  }

  // p(y|x_i) by total probability over classes, evaluated in the log domain
  // so far-tail attribute values cannot zero out the denominator.
  double posterior(std::size_t attr, double x, ClassId y) const {
    if (attr >= d || y < 0 || y >= nc)
      throw std::invalid_argument("posterior index out of range");
    if (prior[y] <= 0.0) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> nums(static_cast<std::size_t>(nc),
                             -std::numeric_limits<double>::infinity());
    for (int c = 0; c < nc; ++c) {
      if (prior[c] <= 0.0) continue;
      nums[c] = std::log(prior[c]) + log_likelihood(c, attr, x);
      best = std::max(best, nums[c]);
    }
    double denom = 0.0;
    for (int c = 0; c < nc; ++c)
      if (prior[c] > 0.0) denom += std::exp(nums[c] - best);
    const double p = std::exp(nums[y] - best) / denom;
    return std::clamp(p, 0.0, 1.0);
  }

  // log p(y) + sum_i log p(x_i|y)
  double joint_log_numerator(const std::vector<double>& x, ClassId y) const {
    double s = std::log(prior[y]);
    for (std::size_t i = 0; i < d; ++i) s += log_likelihood(y, i, x[i]);
    return s;
  }

  // Naive-Bayes p(y|x), normalized over classes in the log domain.
  double joint_posterior(const std::vector<double>& x, ClassId y) const {
    if (x.size() != d || y < 0 || y >= nc)
      throw std::invalid_argument("joint_posterior input out of range");
    if (prior[y] <= 0.0) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> nums(static_cast<std::size_t>(nc),
                             -std::numeric_limits<double>::infinity());
    for (int c = 0; c < nc; ++c) {
      if (prior[c] <= 0.0) continue;
      nums[c] = joint_log_numerator(x, c);
      best = std::max(best, nums[c]);
    }
    double denom = 0.0;
    for (int c = 0; c < nc; ++c)
      if (prior[c] > 0.0) denom += std::exp(nums[c] - best);
    const double p = std::exp(nums[y] - best) / denom;
    return std::clamp(p, 0.0, 1.0);
  }
};

inline std::optional<PosteriorModel> fit_posterior_model(
    const ReliableLabeledSet& rl, std::size_t min_rl = 10,
    double var_floor = 1e-9) {
  if (rl.size() < min_rl || rl.empty()) return std::nullopt;
  const std::size_t d = rl.entries.front().instance.features.size();
  int nc = 2;
  for (const auto& e : rl.entries) nc = std::max(nc, e.label + 1);

  std::vector<RunningStats> acc(static_cast<std::size_t>(nc) * d);
  std::vector<double> counts(static_cast<std::size_t>(nc), 0.0);
  for (const auto& e : rl.entries) {
    counts[e.label] += 1.0;
    for (std::size_t i = 0; i < d; ++i)
      acc[static_cast<std::size_t>(e.label) * d + i].add(
          e.instance.features[i]);
  }
  int distinct = 0;
  for (double c : counts)
    if (c > 0.0) ++distinct;
  if (distinct < 2) return std::nullopt;

  PosteriorModel m;
  m.d = d;
  m.nc = nc;
  m.var_floor = var_floor;
  m.mean.assign(acc.size(), 0.0);
  m.var.assign(acc.size(), var_floor);
  m.prior.assign(static_cast<std::size_t>(nc), 0.0);
  const auto total = static_cast<double>(rl.size());
  for (int c = 0; c < nc; ++c) m.prior[c] = counts[c] / total;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (acc[k].count() == 0) continue;
    m.mean[k] = acc[k].mean();
    m.var[k] = std::max(acc[k].variance(), var_floor);
  }
  return m;
}

// Flat posterior sample plus the standardization applied to it.
struct PosteriorSample {
  std::vector<double> values;        // raw probabilities
  std::vector<double> standardized;  // (v - mean) / stddev, or zeros
  double mean = 0.0;
  double stddev = 0.0;  // population std, so standardized std is exactly 1
  bool zero_std = false;
};

namespace detail {
inline PosteriorSample standardize(std::vector<double> values) {
  PosteriorSample s;
  s.values = std::move(values);
  RunningStats rs;
  for (double v : s.values) rs.add(v);
  s.mean = rs.mean();
  s.stddev = std::sqrt(rs.variance_population());
  s.standardized.resize(s.values.size(), 0.0);
  if (s.stddev > 1e-15) {
    for (std::size_t j = 0; j < s.values.size(); ++j)
      s.standardized[j] = (s.values[j] - s.mean) / s.stddev;
  } else {
    s.zero_std = true;
  }
  return s;
}
}  // namespace detail

// One value per (instance, attribute): the posterior of the assigned label
// given that attribute alone; standardized against its own mean/std.
inline PosteriorSample compute_posterior_sample(
    const PosteriorModel& m, const std::vector<Instance>& instances,
    const std::vector<ClassId>& labels) {
  if (instances.size() != labels.size())
    throw std::invalid_argument("labels not aligned with instances");
  std::vector<double> values;
  values.reserve(instances.size() * m.d);
  for (std::size_t j = 0; j < instances.size(); ++j)
    for (std::size_t i = 0; i < m.d; ++i)
      values.push_back(m.posterior(i, instances[j].features[i], labels[j]));
  return detail::standardize(std::move(values));
}

// One value per instance: the joint posterior of the assigned label.
inline PosteriorSample compute_joint_posterior_sample(
    const PosteriorModel& m, const std::vector<Instance>& instances,
    const std::vector<ClassId>& labels) {
  if (instances.size() != labels.size())
    throw std::invalid_argument("labels not aligned with instances");
  std::vector<double> values;
  values.reserve(instances.size());
  for (std::size_t j = 0; j < instances.size(); ++j)
    values.push_back(m.joint_posterior(instances[j].features, labels[j]));
  return detail::standardize(std::move(values));
}

// Maps raw values onto another sample's standardization axis.
inline std::vector<double> standardize_with(const std::vector<double>& values,
                                            double mean, double stddev) {
  std::vector<double> out(values.size(), 0.0);
  if (stddev > 1e-15)
    for (std::size_t j = 0; j < values.size(); ++j)
      out[j] = (values[j] - mean) / stddev;
  return out;
}

}  // namespace driftkit
