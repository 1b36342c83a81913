#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftkit {

using ClassId = int;

struct Instance {
  std::size_t index = 0;
  std::vector<double> features;
  std::optional<ClassId> label;  // present only when the source exposes it
};

struct Window {
  std::vector<Instance> instances;
  std::size_t start_index = 0;
  std::size_t end_index = 0;  // exclusive

  std::size_t size() const { return instances.size(); }
};

inline double labeled_fraction(const Window& w) {
  if (w.instances.empty()) return 0.0;
  std::size_t labeled = 0;
  for (const auto& inst : w.instances)
    if (inst.label) ++labeled;
  return static_cast<double>(labeled) / static_cast<double>(w.instances.size());
}

// Holds ground truth and meters label queries against a budget.
// query() charges each index once; ground_truth() is free and exists for
// evaluation only.
class LabelOracle {
 public:
  LabelOracle(std::vector<ClassId> truth, double budget)
      : truth_(std::move(truth)), charged_(truth_.size(), false), budget_(budget) {}

  // The budget cap is computed against how much of the stream has arrived.
  void observe_up_to(std::size_t index_exclusive) {
    if (index_exclusive > seen_) seen_ = index_exclusive;
  }

  std::size_t instances_seen() const { return seen_; }
  std::size_t query_count() const { return queries_; }
  std::size_t size() const { return truth_.size(); }

  std::size_t query_cap() const {
    return static_cast<std::size_t>(
        std::ceil(budget_ * static_cast<double>(seen_)));
  }

  bool can_query() const { return queries_ < query_cap(); }

  // Returns nullopt when the budget is exhausted (refusal, not an error).
  std::optional<ClassId> query(std::size_t index) {
    if (index >= truth_.size()) throw std::out_of_range("oracle index");
    if (charged_[index]) return truth_[index];
    if (!can_query()) return std::nullopt;
    charged_[index] = true;
    ++queries_;
    return truth_[index];
  }

  ClassId ground_truth(std::size_t index) const {
    if (index >= truth_.size()) throw std::out_of_range("oracle index");
    return truth_[index];
  }

 private:
  std::vector<ClassId> truth_;
  std::vector<bool> charged_;
  double budget_ = 1.0;
  std::size_t seen_ = 0;
  std::size_t queries_ = 0;
};

// Sequential single-consumer source of instances.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual std::optional<Instance> next() = 0;
  virtual std::size_t dimension() const = 0;
  virtual int num_classes() const = 0;
};

inline std::optional<Window> next_window(StreamSource& source, std::size_t n) {
  if (n < 1) throw std::invalid_argument("window size must be >= 1");
  Window w;
  w.instances.reserve(n);
  while (w.instances.size() < n) {
    auto inst = source.next();
    if (!inst) break;
    w.instances.push_back(std::move(*inst));
  }
  if (w.instances.empty()) return std::nullopt;
  w.start_index = w.instances.front().index;
  w.end_index = w.instances.back().index + 1;
  return w;
}

// A fully materialized stream: unlabeled instances plus the ground truth that
// belongs in the oracle.
struct Dataset {
  std::string name;
  std::size_t dim = 0;
  int num_classes = 2;
  std::vector<Instance> instances;  // labels stripped
  std::vector<ClassId> truth;
};

class DatasetSource : public StreamSource {
 public:
  explicit DatasetSource(const Dataset& data) : data_(&data) {}

  std::optional<Instance> next() override {
    if (pos_ >= data_->instances.size()) return std::nullopt;
    return data_->instances[pos_++];
  }
  std::size_t dimension() const override { return data_->dim; }
  int num_classes() const override { return data_->num_classes; }

 private:
  const Dataset* data_;
  std::size_t pos_ = 0;
};

struct CsvError : std::runtime_error {
  CsvError(const std::string& msg, std::size_t row)
      : std::runtime_error(msg + " (row " + std::to_string(row) + ")"),
        row_number(row) {}
  std::size_t row_number;
};

// CSV layout: header, d numeric feature columns, final integer column named
// "label". Ground truth goes to Dataset::truth, never onto the instances.
inline Dataset read_csv_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  Dataset data;
  data.name = path;
  std::string line;
  std::size_t row = 0;

  if (!std::getline(in, line)) throw CsvError("empty file", 0);
  ++row;
  {
    std::stringstream header(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(header, col, ',')) cols.push_back(col);
    if (cols.size() < 2 || cols.back() != "label")
      throw CsvError("header must end with a 'label' column", row);
    data.dim = cols.size() - 1;
  }

  int max_class = 0;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Instance inst;
    inst.index = index;
    inst.features.reserve(data.dim);
    for (std::size_t i = 0; i < data.dim; ++i) {
      if (!std::getline(ss, cell, ','))
        throw CsvError("missing feature column", row);
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw CsvError("non-numeric feature value '" + cell + "'", row);
      }
      if (used != cell.size() || !std::isfinite(v))
        throw CsvError("non-numeric feature value '" + cell + "'", row);
      inst.features.push_back(v);
    }
    if (!std::getline(ss, cell, ','))
      throw CsvError("missing label column", row);
    long lbl = 0;
    try {
      std::size_t used = 0;
      lbl = std::stol(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw CsvError("bad label value '" + cell + "'", row);
    }
    if (lbl < 0) throw CsvError("negative label value '" + cell + "'", row);
    if (lbl > max_class) max_class = static_cast<int>(lbl);
    data.truth.push_back(static_cast<ClassId>(lbl));
    data.instances.push_back(std::move(inst));
    ++index;
  }
  data.num_classes = max_class + 1;
  if (data.num_classes < 2) data.num_classes = 2;
  return data;
}

inline Dataset materialize(StreamSource& source, const std::string& name) {
  Dataset data;
  data.name = name;
  data.dim = source.dimension();
  data.num_classes = source.num_classes();
  while (auto inst = source.next()) {
    if (!inst->label)
      throw std::runtime_error("materialize requires a labeled source");
    data.truth.push_back(*inst->label);
    inst->label.reset();
    data.instances.push_back(std::move(*inst));
  }
  return data;
}

}  // namespace driftkit
