#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "driftkit/baselines.hpp"
#include "driftkit/detector.hpp"
#include "driftkit/knowledge.hpp"
#include "driftkit/stream.hpp"

namespace driftkit {

enum class Method { density, ddm, eddm, adwin, ph };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::density: return "density";
    case Method::ddm: return "ddm";
    case Method::eddm: return "eddm";
    case Method::adwin: return "adwin";
    case Method::ph: return "ph";
  }
  return "?";
}

inline const char* method_label(Method m) {
  switch (m) {
    case Method::density: return "DensityEst";
    case Method::ddm: return "DDM";
    case Method::eddm: return "EDDM";
    case Method::adwin: return "ADW";
    case Method::ph: return "PH";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  if (s == "density") return Method::density;
  if (s == "ddm") return Method::ddm;
  if (s == "eddm") return Method::eddm;
  if (s == "adwin") return Method::adwin;
  if (s == "ph") return Method::ph;
  return std::nullopt;
}

struct ExperimentConfig {
  Method method = Method::density;
  double alpha = 1.0;           // density label budget
  double baseline_alpha = 1.0;  // baselines run fully supervised by default
  std::size_t window = 1000;
  KdMethod kd = KdMethod::active;
  std::uint64_t seed = 1;
  DetectorConfig detector;
  DdmParams ddm;
  EddmParams eddm;
  AdwinParams adwin;
  PageHinkleyParams ph;
  std::vector<std::size_t> true_points;  // known drift indices, for metrics
  std::size_t delay_tolerance = 3000;
  std::size_t background_patience = 10;  // drift-free windows before discard
  bool perfect_predictor = false;        // test hook: predict ground truth

  void validate() const {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0)
      throw std::invalid_argument("alpha must be in (0, 1]");
    if (!(baseline_alpha > 0.0) || baseline_alpha > 1.0)
      throw std::invalid_argument("baseline alpha must be in (0, 1]");
    detector.validate();
  }
};

struct WindowRecord {
  std::size_t window_end_index = 0;
  double accuracy = 0.0;
  std::optional<double> epsilon;
  DriftState state = DriftState::Stable;
  std::size_t rl_size = 0;
  std::size_t query_count = 0;  // oracle queries spent on this window
  bool drift_flag = false;
  bool skipped = false;
};

struct RunResult {
  std::vector<WindowRecord> windows;
  std::vector<std::size_t> events;  // drift instance indices, ascending
  std::size_t instances = 0;
  std::size_t query_count = 0;
  double avg_accuracy = 0.0;
  std::vector<std::optional<std::size_t>> delays;  // one per true point
  std::size_t false_alarm_count = 0;
};

// Per true point: first event at or after it, before the next true point.
inline std::vector<std::optional<std::size_t>> detection_delay(
    const std::vector<std::size_t>& events,
    const std::vector<std::size_t>& true_points) {
  std::vector<std::optional<std::size_t>> delays;
  delays.reserve(true_points.size());
  for (std::size_t k = 0; k < true_points.size(); ++k) {
    const std::size_t p = true_points[k];
    const std::size_t next = (k + 1 < true_points.size())
                                 ? true_points[k + 1]
                                 : std::numeric_limits<std::size_t>::max();
    std::optional<std::size_t> delay;
    for (std::size_t e : events) {
      if (e >= p && e < next) {
        delay = e - p;
        break;
      }
    }
    delays.push_back(delay);
  }
  return delays;
}

inline std::size_t false_alarms(const std::vector<std::size_t>& events,
                                const std::vector<std::size_t>& true_points,
                                std::size_t tolerance) {
  std::size_t count = 0;
  for (std::size_t e : events) {
    bool matched = false;
    for (std::size_t p : true_points)
      if (e >= p && e - p <= tolerance) {
        matched = true;
        break;
      }
    if (!matched) ++count;
  }
  return count;
}

namespace detail {

class BaselineDetector {
 public:
  BaselineDetector(Method m, const ExperimentConfig& cfg)
      : m_(m), ddm_(cfg.ddm), eddm_(cfg.eddm), adwin_(cfg.adwin),
        ph_(cfg.ph) {}

  DriftState update(int error_bit) {
    switch (m_) {
      case Method::ddm: return ddm_.update(error_bit);
      case Method::eddm: return eddm_.update(error_bit);
      case Method::adwin: return adwin_.update(error_bit);
      case Method::ph: return ph_.update(error_bit);
      case Method::density: break;
    }
    throw std::logic_error("not a baseline method");
  }

 private:
  Method m_;
  DdmDetector ddm_;
  EddmDetector eddm_;
  AdwinDetector adwin_;
  PageHinkleyDetector ph_;
};

inline void density_run(const ExperimentConfig& cfg, const Dataset& data,
                        LabelOracle& oracle, std::mt19937_64& kd_rng,
                        RunResult& res, std::size_t& correct_total) {
  DetectorConfig dcfg = cfg.detector;
  dcfg.alpha = cfg.alpha;
  DensityDriftDetector det(data.dim, data.num_classes, dcfg);
  DatasetSource source(data);

  while (auto wopt = next_window(source, cfg.window)) {
    const Window& w = *wopt;
    oracle.observe_up_to(w.end_index);
    const std::size_t q_before = oracle.query_count();
    ReliableLabeledSet rl =
        discover(cfg.kd, w, oracle, LabelBudget{cfg.alpha}, kd_rng);

    std::size_t correct = 0;
    for (const Instance& inst : w.instances) {
      const ClassId pred = cfg.perfect_predictor
                               ? oracle.ground_truth(inst.index)
                               : det.incremental().predict(inst.features);
      if (pred == oracle.ground_truth(inst.index)) ++correct;
    }
    const DriftVerdict v = det.process_window(w, rl);

    WindowRecord rec;
    rec.window_end_index = w.end_index;
    rec.accuracy = static_cast<double>(correct) / static_cast<double>(w.size());
    rec.epsilon = v.epsilon;
    rec.state = v.state;
    rec.rl_size = rl.size();
    rec.query_count = oracle.query_count() - q_before;
    rec.drift_flag = (v.state == DriftState::Drift);
    rec.skipped = v.detection_skipped;
    if (rec.drift_flag) res.events.push_back(w.end_index);
    res.windows.push_back(rec);
    correct_total += correct;
    res.instances += w.size();
  }
}

inline void baseline_run(const ExperimentConfig& cfg, const Dataset& data,
                         LabelOracle& oracle, std::mt19937_64& kd_rng,
                         RunResult& res, std::size_t& correct_total) {
  HoeffdingTree base(data.dim, data.num_classes, cfg.detector.tree);
  std::optional<HoeffdingTree> background;
  std::size_t background_age = 0;  // windows since the warning opened it
  BaselineDetector det(cfg.method, cfg);
  DatasetSource source(data);

  while (auto wopt = next_window(source, cfg.window)) {
    const Window& w = *wopt;
    oracle.observe_up_to(w.end_index);
    const std::size_t q_before = oracle.query_count();
    ReliableLabeledSet rl =
        discover(cfg.kd, w, oracle, LabelBudget{cfg.baseline_alpha}, kd_rng);

    bool window_drift = false, window_warn = false;
    std::size_t correct = 0;
    auto it = rl.entries.begin();
    for (const Instance& inst : w.instances) {
      const ClassId truth = oracle.ground_truth(inst.index);
      const ClassId pred = cfg.perfect_predictor
                               ? truth
                               : base.predict(inst.features);
      if (pred == truth) ++correct;

      while (it != rl.entries.end() && it->instance.index < inst.index) ++it;
      if (it == rl.entries.end() || it->instance.index != inst.index) continue;
      const ClassId label = it->label;
      ++it;

      const DriftState st = det.update(pred != label ? 1 : 0);
      if (st == DriftState::Warning && !background) {
        background.emplace(data.dim, data.num_classes, cfg.detector.tree);
        background_age = 0;
      }
      if (background) background->train_one(inst.features, label);
      if (st == DriftState::Drift) {
        window_drift = true;
        res.events.push_back(inst.index);
        if (background) {
          base = std::move(*background);
          background.reset();
        } else {
          base = HoeffdingTree(data.dim, data.num_classes, cfg.detector.tree);
        }
      } else {
        if (st == DriftState::Warning) window_warn = true;
        base.train_one(inst.features, label);
      }
    }
    if (background) {
      ++background_age;
      if (background_age >= cfg.background_patience) background.reset();
    }

    WindowRecord rec;
    rec.window_end_index = w.end_index;
    rec.accuracy = static_cast<double>(correct) / static_cast<double>(w.size());
    rec.state = window_drift ? DriftState::Drift
                             : (window_warn ? DriftState::Warning
                                            : DriftState::Stable);
    rec.rl_size = rl.size();
    rec.query_count = oracle.query_count() - q_before;
    rec.drift_flag = window_drift;
    res.windows.push_back(rec);
    correct_total += correct;
    res.instances += w.size();
  }
}

}  // namespace detail

// Test-then-train over the whole dataset: every prediction is made by the
// model as it stood before the instance could influence it.
inline RunResult prequential_run(const ExperimentConfig& cfg,
                                 const Dataset& data) {
  cfg.validate();
  if (data.instances.empty())
    throw std::invalid_argument("dataset is empty");

  const double budget =
      cfg.method == Method::density ? cfg.alpha : cfg.baseline_alpha;
  LabelOracle oracle(data.truth, budget);
  std::mt19937_64 kd_rng(cfg.seed);

  RunResult res;
  std::size_t correct_total = 0;
  if (cfg.method == Method::density)
    detail::density_run(cfg, data, oracle, kd_rng, res, correct_total);
  else
    detail::baseline_run(cfg, data, oracle, kd_rng, res, correct_total);

  res.query_count = oracle.query_count();
  res.avg_accuracy = res.instances
                         ? static_cast<double>(correct_total) /
                               static_cast<double>(res.instances)
                         : 0.0;
  res.delays = detection_delay(res.events, cfg.true_points);
  res.false_alarm_count =
      false_alarms(res.events, cfg.true_points, cfg.delay_tolerance);
  return res;
}

// ---------------------------------------------------------------------------
// Output files

namespace detail {
inline std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}
}  // namespace detail

inline void write_config_header(std::ostream& os, const std::string& run_id,
                                const ExperimentConfig& cfg,
                                const std::string& dataset_name) {
  os << "# run_id=" << run_id << "\n"
     << "# method=" << to_string(cfg.method) << "\n"
     << "# dataset=" << dataset_name << "\n"
     << "# alpha=" << detail::fmt("%g", cfg.alpha) << "\n"
     << "# baseline_alpha=" << detail::fmt("%g", cfg.baseline_alpha) << "\n"
     << "# window=" << cfg.window << "\n"
     << "# kd=" << (cfg.kd == KdMethod::active ? "active" : "pu") << "\n"
     << "# seed=" << cfg.seed << "\n"
     << "# tau=" << detail::fmt("%g", cfg.detector.tau) << "\n"
     << "# phi=" << detail::fmt("%g", cfg.detector.phi) << "\n"
     << "# delta=" << detail::fmt("%g", cfg.detector.delta) << "\n"
     << "# min_rl=" << cfg.detector.min_rl << "\n"
     << "# warn_z=" << detail::fmt("%g", cfg.detector.warn_z) << "\n"
     << "# drift_z=" << detail::fmt("%g", cfg.detector.drift_z) << "\n"
     << "# ref_len=" << cfg.detector.ref_len << "\n"
     << "# escalate_after=" << cfg.detector.escalate_after << "\n"
     << "# static_min_fit=" << cfg.detector.static_min_fit << "\n"
     << "# grace_period=" << cfg.detector.tree.grace_period << "\n"
     << "# split_confidence="
     << detail::fmt("%g", cfg.detector.tree.split_confidence) << "\n"
     << "# tie_threshold=" << detail::fmt("%g", cfg.detector.tree.tie_threshold)
     << "\n"
     << "# ddm_min_instances=" << cfg.ddm.min_instances << "\n"
     << "# eddm_min_errors=" << cfg.eddm.min_errors << "\n"
     << "# adwin_delta=" << detail::fmt("%g", cfg.adwin.delta) << "\n"
     << "# ph_lambda=" << detail::fmt("%g", cfg.ph.lambda) << "\n"
     << "# ph_delta=" << detail::fmt("%g", cfg.ph.delta) << "\n";
  if (cfg.detector.force_gamma)
    os << "# force_gamma=" << detail::fmt("%g", *cfg.detector.force_gamma)
       << "\n";
}

inline void write_results_csv(std::ostream& os, const std::string& run_id,
                              const ExperimentConfig& cfg,
                              const std::string& dataset_name,
                              const RunResult& res) {
  write_config_header(os, run_id, cfg, dataset_name);
  os << "run_id,method,dataset,alpha,window_end_index,accuracy,epsilon,state,"
        "drift_flag\n";
  for (const WindowRecord& r : res.windows) {
    os << run_id << ',' << to_string(cfg.method) << ',' << dataset_name << ','
       << detail::fmt("%g", cfg.alpha) << ',' << r.window_end_index << ','
       << detail::fmt("%.6f", r.accuracy) << ',';
    if (r.epsilon) os << detail::fmt("%.9g", *r.epsilon);
    os << ',' << to_string(r.state) << ',' << (r.drift_flag ? 1 : 0) << "\n";
  }
}

inline void write_events_csv(std::ostream& os, const std::string& run_id,
                             const RunResult& res) {
  os << "run_id,instance_index\n";
  for (std::size_t e : res.events) os << run_id << ',' << e << "\n";
}

// ---------------------------------------------------------------------------
// Benchmark grid

struct BenchDataset {
  std::string name;
  Dataset data;
  std::vector<std::size_t> true_points;
};

struct SummaryRow {
  Method method = Method::density;
  double alpha = 1.0;
  std::string dataset;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double acc_mean = 0.0;
  double acc_std = 0.0;
  double drift_mean = 0.0;
  double delay_mean = 0.0;  // over detected true points; -1 when none
  double fa_mean = 0.0;
  double queries_mean = 0.0;
};

// One row per (method, budget, dataset), averaged over seeds. Baselines do
// not vary with the density budget, so they contribute one row each.
inline std::vector<SummaryRow> bench_grid(
    const std::vector<Method>& methods, const std::vector<double>& budgets,
    const std::vector<BenchDataset>& datasets,
    const std::vector<std::uint64_t>& seeds, const ExperimentConfig& base) {
  if (methods.empty() || datasets.empty() || seeds.empty())
    throw std::invalid_argument("benchmark grid is empty");
  if (budgets.empty() &&
      std::find(methods.begin(), methods.end(), Method::density) !=
          methods.end())
    throw std::invalid_argument("density method needs at least one budget");

  std::vector<SummaryRow> rows;
  for (Method m : methods) {
    std::vector<double> cell_budgets =
        (m == Method::density) ? budgets : std::vector<double>{1.0};
    for (double b : cell_budgets) {
      for (const BenchDataset& ds : datasets) {
        SummaryRow row;
        row.method = m;
        row.alpha = b;
        row.dataset = ds.name;
        RunningStats acc;
        double drift_sum = 0.0, fa_sum = 0.0, query_sum = 0.0;
        double delay_sum = 0.0;
        std::size_t delay_n = 0;
        for (std::uint64_t s : seeds) {
          ExperimentConfig cfg = base;
          cfg.method = m;
          cfg.alpha = b;
          cfg.seed = s;
          cfg.true_points = ds.true_points;
          try {
            RunResult r = prequential_run(cfg, ds.data);
            acc.add(r.avg_accuracy);
            drift_sum += static_cast<double>(r.events.size());
            fa_sum += static_cast<double>(r.false_alarm_count);
            query_sum += static_cast<double>(r.query_count);
            for (const auto& d : r.delays)
              if (d) {
                delay_sum += static_cast<double>(*d);
                ++delay_n;
              }
            ++row.runs;
          } catch (const std::exception&) {
            ++row.failures;
          }
        }
        if (row.runs) {
          const auto n = static_cast<double>(row.runs);
          row.acc_mean = acc.mean();
          row.acc_std = acc.stddev();
          row.drift_mean = drift_sum / n;
          row.fa_mean = fa_sum / n;
          row.queries_mean = query_sum / n;
        }
        row.delay_mean =
            delay_n ? delay_sum / static_cast<double>(delay_n) : -1.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

inline void write_summary_csv(std::ostream& os,
                              const std::vector<SummaryRow>& rows) {
  os << "method,alpha,dataset,runs,failures,acc_mean,acc_std,drift_mean,"
        "delay_mean,false_alarms_mean,queries_mean\n";
  for (const SummaryRow& r : rows) {
    os << to_string(r.method) << ',' << detail::fmt("%g", r.alpha) << ','
       << r.dataset << ',' << r.runs << ',' << r.failures << ','
       << detail::fmt("%.6f", r.acc_mean) << ','
       << detail::fmt("%.6f", r.acc_std) << ','
       << detail::fmt("%.3f", r.drift_mean) << ','
       << detail::fmt("%.1f", r.delay_mean) << ','
       << detail::fmt("%.3f", r.fa_mean) << ','
       << detail::fmt("%.1f", r.queries_mean) << "\n";
  }
}

// Plain-text table: one line per method/budget, per-dataset accuracy and
// drift-count columns.
inline void render_summary_table(std::ostream& os,
                                 const std::vector<SummaryRow>& rows) {
  std::vector<std::string> datasets;
  for (const SummaryRow& r : rows)
    if (std::find(datasets.begin(), datasets.end(), r.dataset) ==
        datasets.end())
      datasets.push_back(r.dataset);

  std::vector<std::pair<Method, double>> lines;
  for (const SummaryRow& r : rows) {
    std::pair<Method, double> key{r.method, r.alpha};
    if (std::find(lines.begin(), lines.end(), key) == lines.end())
      lines.push_back(key);
  }

  os << std::left << std::setw(20) << "Method";
  for (const std::string& d : datasets) {
    os << std::setw(22) << (d + " accuracy") << std::setw(12)
       << (d + " drifts");
  }
  os << "\n";
  for (const auto& [m, a] : lines) {
    std::string label = method_label(m);
    if (m == Method::density)
      label = "(" + detail::fmt("%.1f", a) + ") " + label;
    os << std::left << std::setw(20) << label;
    for (const std::string& d : datasets) {
      const SummaryRow* row = nullptr;
      for (const SummaryRow& r : rows)
        if (r.method == m && r.alpha == a && r.dataset == d) row = &r;
      if (!row || row->runs == 0) {
        os << std::setw(22) << "-" << std::setw(12) << "-";
        continue;
      }
      os << std::setw(22)
         << (detail::fmt("%.3f", row->acc_mean) + " (" +
             detail::fmt("%.3f", row->acc_std) + ")")
         << std::setw(12) << detail::fmt("%.1f", row->drift_mean);
    }
    os << "\n";
  }
}

}  // namespace driftkit
