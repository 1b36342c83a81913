#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "driftkit/hoeffding.hpp"
#include "driftkit/stream.hpp"

namespace driftkit {

enum class Provenance { given, queried, inferred };

struct RLEntry {
  Instance instance;
  ClassId label = 0;
  Provenance provenance = Provenance::given;
};

// Labeled material a window contributes to training: labels that arrived with
// the stream, labels bought from the oracle, and labels inferred by PU.
struct ReliableLabeledSet {
  std::vector<RLEntry> entries;
  bool oracle_refused = false;  // budget ran out mid-assembly; set truncated
  bool shortfall = false;       // PU negative pool smaller than requested
  bool no_positives = false;    // PU got a window without a single positive

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  std::size_t count(Provenance p) const {
    std::size_t k = 0;
    for (const auto& e : entries)
      if (e.provenance == p) ++k;
    return k;
  }

  std::pair<std::vector<std::vector<double>>, std::vector<ClassId>> xy() const {
    std::vector<std::vector<double>> X;
    std::vector<ClassId> y;
    X.reserve(entries.size());
    y.reserve(entries.size());
    for (const auto& e : entries) {
      X.push_back(e.instance.features);
      y.push_back(e.label);
    }
    return {std::move(X), std::move(y)};
  }
};

struct LabelBudget {
  double alpha = 1.0;

  void validate() const {
    if (!(alpha > 0.0) || alpha > 1.0)
      throw std::invalid_argument("label budget must be in (0, 1]");
  }
};

namespace detail {
inline void sort_by_index(std::vector<RLEntry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const RLEntry& a, const RLEntry& b) {
              return a.instance.index < b.instance.index;
            });
}
}  // namespace detail

// Random-selection active learning: keep the labels the window already has,
// then buy uniformly sampled unlabeled instances until ceil(alpha * n) labels
// are held. Oracle refusal stops buying and leaves the set short.
inline ReliableLabeledSet active_learn(const Window& w, LabelOracle& oracle,
                                       LabelBudget budget,
                                       std::mt19937_64& rng) {
  budget.validate();
  ReliableLabeledSet rl;
  std::vector<std::size_t> unlabeled;
  for (std::size_t i = 0; i < w.instances.size(); ++i) {
    const Instance& inst = w.instances[i];
    if (inst.label)
      rl.entries.push_back({inst, *inst.label, Provenance::given});
    else
      unlabeled.push_back(i);
  }
  const auto target = static_cast<std::size_t>(
      std::ceil(budget.alpha * static_cast<double>(w.size())));
  if (rl.entries.size() >= target) return rl;

  std::shuffle(unlabeled.begin(), unlabeled.end(), rng);
  for (std::size_t i : unlabeled) {
    if (rl.entries.size() >= target) break;
    const Instance& inst = w.instances[i];
    auto bought = oracle.query(inst.index);
    if (!bought) {
      rl.oracle_refused = true;
      break;
    }
    rl.entries.push_back({inst, *bought, Provenance::queried});
  }
  detail::sort_by_index(rl.entries);
  return rl;
}

// Positive-unlabeled assembly: a biased tree trained with every unlabeled
// instance treated as negative selects the reliable-negative pool; from it,
// as many instances as there are positives are drawn uniformly. Inference
// never assigns the positive label.
inline ReliableLabeledSet pu_learn(const Window& w, LabelBudget budget,
                                   std::mt19937_64& rng) {
  budget.validate();
  ReliableLabeledSet rl;
  if (w.instances.empty()) {
    rl.no_positives = true;
    return rl;
  }

  std::vector<std::size_t> positives, unlabeled;
  ClassId pos = -1;
  for (std::size_t i = 0; i < w.instances.size(); ++i) {
    const Instance& inst = w.instances[i];
    if (inst.label) {
      if (pos < 0) pos = *inst.label;
      if (*inst.label != pos)
        throw std::invalid_argument("pu_learn expects a single labeled class");
      positives.push_back(i);
    } else {
      unlabeled.push_back(i);
    }
  }
  if (positives.empty()) {
    rl.no_positives = true;
    return rl;
  }
  if (pos != 0 && pos != 1)
    throw std::invalid_argument("pu_learn expects binary labels");
  const ClassId neg = 1 - pos;

  const std::size_t d = w.instances.front().features.size();
  HoeffdingTree biased(d, 2);
  for (const Instance& inst : w.instances)
    biased.train_one(inst.features, inst.label ? pos : neg);

  std::vector<std::size_t> pool;
  for (std::size_t i : unlabeled)
    if (biased.predict(w.instances[i].features) == neg) pool.push_back(i);

  const std::size_t want = positives.size();
  if (pool.size() < want)
    rl.shortfall = true;
  else
    std::shuffle(pool.begin(), pool.end(), rng);
  const std::size_t take = std::min(want, pool.size());

  for (std::size_t i : positives)
    rl.entries.push_back({w.instances[i], pos, Provenance::given});
  for (std::size_t k = 0; k < take; ++k)
    rl.entries.push_back({w.instances[pool[k]], neg, Provenance::inferred});
  detail::sort_by_index(rl.entries);
  return rl;
}

enum class KdMethod { active, pu };

inline ReliableLabeledSet discover(KdMethod method, const Window& w,
                                   LabelOracle& oracle, LabelBudget budget,
                                   std::mt19937_64& rng) {
  if (method == KdMethod::active) return active_learn(w, oracle, budget, rng);
  return pu_learn(w, budget, rng);
}

}  // namespace driftkit
