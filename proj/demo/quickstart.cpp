// Minimal end-to-end walk: stream a SEA concept with one injected drift,
// assemble reliable labels under a 30% budget, and watch the detector flag
// the change.

#include <iostream>

#include "driftkit/driftkit.hpp"

int main() {
  using namespace driftkit;

  const std::size_t length = 30000;
  const std::size_t drift_at = 18000;

  SeaSource source(7, length, DriftSchedule{{drift_at}, 0.05});
  Dataset data = materialize(source, "sea-quickstart");

  const double alpha = 0.3;
  LabelOracle oracle(data.truth, alpha);
  std::mt19937_64 rng(7);

  DetectorConfig cfg;
  cfg.alpha = alpha;
  DensityDriftDetector detector(data.dim, data.num_classes, cfg);

  DatasetSource stream(data);
  while (auto w = next_window(stream, 1000)) {
    oracle.observe_up_to(w->end_index);
    ReliableLabeledSet rl = active_learn(*w, oracle, LabelBudget{alpha}, rng);

    std::size_t correct = 0;
    for (const Instance& inst : w->instances)
      if (detector.incremental().predict(inst.features) ==
          oracle.ground_truth(inst.index))
        ++correct;

    DriftVerdict v = detector.process_window(*w, rl);
    std::cout << "window ending " << v.window_end_index << ": "
              << to_string(v.state) << ", accuracy "
              << static_cast<double>(correct) / static_cast<double>(w->size());
    if (v.epsilon) std::cout << ", epsilon " << *v.epsilon;
    std::cout << "\n";
  }

  std::cout << "labels bought: " << oracle.query_count() << " of "
            << oracle.size() << "\n";
  return 0;
}
