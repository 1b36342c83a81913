// Command-line front end: generate synthetic streams, run single
// experiments, sweep benchmark grids, render report tables.
//
// Exit codes: 0 ok; 2 bad flags or configuration; 3 generate I/O failure;
// 4 dataset error; 5 run failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "driftkit/driftkit.hpp"

namespace fs = std::filesystem;
using namespace driftkit;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitGenerateIo = 3;
constexpr int kExitDataset = 4;
constexpr int kExitRunFailure = 5;

std::string default_out_dir() {
  const char* env = std::getenv("DRIFTKIT_OUT");
  return env && *env ? env : ".";
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? "."
                                                    : path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

// "path:25000:50000" -> dataset file plus its true drift points
std::pair<std::string, std::vector<std::size_t>> split_data_spec(
    const std::string& spec) {
  std::vector<std::size_t> points;
  std::string path = spec;
  std::size_t colon = path.find(':');
  if (colon != std::string::npos) {
    std::stringstream rest(path.substr(colon + 1));
    path = path.substr(0, colon);
    std::string tok;
    while (std::getline(rest, tok, ':')) {
      if (tok.empty()) continue;
      points.push_back(std::stoull(tok));
    }
  }
  return {path, points};
}

struct GenerateArgs {
  std::string gen;
  std::size_t length = 0;
  std::uint64_t seed = 1;
  std::vector<std::size_t> drift_at;
  std::optional<double> noise;
  std::size_t dim = 10;  // hyperplane only
  std::vector<double> thetas;
  std::string out_path;
};

int cmd_generate(const GenerateArgs& a) {
  DriftSchedule schedule;
  schedule.drift_points = a.drift_at;
  std::unique_ptr<StreamSource> source;
  try {
    if (a.gen == "sea") {
      schedule.noise = a.noise.value_or(SeaSource::kDefaultNoise);
      source = a.thetas.empty()
                   ? std::make_unique<SeaSource>(a.seed, a.length, schedule)
                   : std::make_unique<SeaSource>(a.seed, a.length, schedule,
                                                 a.thetas);
    } else {
      schedule.noise = a.noise.value_or(HyperplaneSource::kDefaultNoise);
      source = std::make_unique<HyperplaneSource>(a.seed, a.length, a.dim,
                                                  schedule);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  fs::path out = a.out_path.empty()
                     ? fs::path(default_out_dir()) /
                           (a.gen + "_" + std::to_string(a.length) + ".csv")
                     : fs::path(a.out_path);
  try {
    if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
    const std::size_t rows = write_dataset(*source, out.string());
    std::cout << out.string() << " (" << rows << " rows)\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGenerateIo;
  }
  return 0;
}

struct RunArgs {
  std::string data_spec;
  std::string method = "density";
  double alpha = 1.0;
  double baseline_alpha = 1.0;
  std::size_t window = 1000;
  std::string kd = "active";
  std::uint64_t seed = 1;
  double tau = 0.05, phi = 0.1, delta = 0.0;
  std::vector<std::size_t> true_drift;
  std::size_t tolerance = 3000;
  std::optional<double> force_gamma;
  std::string run_id;
  std::string out_dir;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig cfg;
  auto [path, embedded_points] = split_data_spec(a.data_spec);
  const auto method = parse_method(a.method);
  if (!method) {
    std::cerr << "error: unknown method '" << a.method << "'\n";
    return kExitUsage;
  }
  cfg.method = *method;
  cfg.alpha = a.alpha;
  cfg.baseline_alpha = a.baseline_alpha;
  cfg.window = a.window;
  cfg.kd = (a.kd == "pu") ? KdMethod::pu : KdMethod::active;
  cfg.seed = a.seed;
  cfg.detector.tau = a.tau;
  cfg.detector.phi = a.phi;
  cfg.detector.delta = a.delta;
  cfg.detector.alpha = a.alpha;
  cfg.detector.force_gamma = a.force_gamma;
  cfg.true_points = a.true_drift.empty() ? embedded_points : a.true_drift;
  cfg.delay_tolerance = a.tolerance;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Dataset data;
  try {
    data = read_csv_dataset(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataset;
  }

  const std::string dataset_name = stem_of(path);
  std::string run_id = a.run_id;
  if (run_id.empty()) {
    std::ostringstream id;
    id << to_string(cfg.method) << "-" << dataset_name << "-a"
       << detail::fmt("%g", cfg.alpha) << "-s" << cfg.seed;
    run_id = id.str();
  }

  try {
    const RunResult res = prequential_run(cfg, data);

    const fs::path dir =
        a.out_dir.empty() ? fs::path(default_out_dir()) : fs::path(a.out_dir);
    fs::create_directories(dir);
    {
      auto out = open_out(dir / (run_id + "_results.csv"));
      write_results_csv(out, run_id, cfg, dataset_name, res);
    }
    {
      auto out = open_out(dir / (run_id + "_events.csv"));
      write_events_csv(out, run_id, res);
    }
    SummaryRow row;
    row.method = cfg.method;
    row.alpha = cfg.alpha;
    row.dataset = dataset_name;
    row.runs = 1;
    row.acc_mean = res.avg_accuracy;
    row.drift_mean = static_cast<double>(res.events.size());
    row.fa_mean = static_cast<double>(res.false_alarm_count);
    row.queries_mean = static_cast<double>(res.query_count);
    double delay_sum = 0.0;
    std::size_t delay_n = 0;
    for (const auto& d : res.delays)
      if (d) {
        delay_sum += static_cast<double>(*d);
        ++delay_n;
      }
    row.delay_mean = delay_n ? delay_sum / static_cast<double>(delay_n) : -1.0;
    {
      auto out = open_out(dir / (run_id + "_summary.csv"));
      write_summary_csv(out, {row});
    }

    std::cout << run_id << ": accuracy " << detail::fmt("%.4f", res.avg_accuracy)
              << ", drift events " << res.events.size() << ", queries "
              << res.query_count << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailure;
  }
  return 0;
}

struct BenchArgs {
  std::vector<std::string> data_specs;
  std::vector<std::string> methods{"density"};
  std::vector<double> budgets{1.0};
  std::vector<std::uint64_t> seeds{1};
  std::size_t window = 1000;
  std::string kd = "active";
  double tau = 0.05, phi = 0.1, delta = 0.0;
  std::string out_dir;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<Method> methods;
  for (const std::string& m : a.methods) {
    const auto parsed = parse_method(m);
    if (!parsed) {
      std::cerr << "error: unknown method '" << m << "'\n";
      return kExitUsage;
    }
    methods.push_back(*parsed);
  }

  ExperimentConfig base;
  base.window = a.window;
  base.kd = (a.kd == "pu") ? KdMethod::pu : KdMethod::active;
  base.detector.tau = a.tau;
  base.detector.phi = a.phi;
  base.detector.delta = a.delta;
  try {
    base.validate();
    for (double b : a.budgets)
      if (!(b > 0.0) || b > 1.0)
        throw std::invalid_argument("budgets must be in (0, 1]");
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<BenchDataset> datasets;
  for (const std::string& spec : a.data_specs) {
    auto [path, points] = split_data_spec(spec);
    BenchDataset ds;
    ds.name = stem_of(path);
    ds.true_points = points;
    try {
      ds.data = read_csv_dataset(path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitDataset;
    }
    datasets.push_back(std::move(ds));
  }

  std::vector<SummaryRow> rows;
  try {
    rows = bench_grid(methods, a.budgets, datasets, a.seeds, base);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  bool any_ok = false;
  std::size_t failures = 0;
  for (const SummaryRow& r : rows) {
    if (r.runs > 0) any_ok = true;
    failures += r.failures;
  }
  if (failures)
    std::cerr << "warning: " << failures << " grid runs failed\n";

  const fs::path dir =
      a.out_dir.empty() ? fs::path(default_out_dir()) : fs::path(a.out_dir);
  try {
    fs::create_directories(dir);
    {
      auto out = open_out(dir / "bench_summary.csv");
      write_summary_csv(out, rows);
    }
    {
      auto out = open_out(dir / "bench_summary.txt");
      render_summary_table(out, rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailure;
  }
  render_summary_table(std::cout, rows);
  return any_ok ? 0 : kExitRunFailure;
}

struct ReportArgs {
  std::string summary_path;
  std::string events_path;
  std::string out_path;
  bool markdown = false;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

int cmd_report(const ReportArgs& a) {
  std::ifstream in(a.summary_path);
  if (!in) {
    std::cerr << "error: cannot open " << a.summary_path << "\n";
    return kExitDataset;
  }
  std::vector<SummaryRow> rows;
  std::string line;
  bool header = true;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() < 11) {
      std::cerr << "error: malformed summary row " << row_no << "\n";
      return kExitDataset;
    }
    SummaryRow r;
    const auto m = parse_method(cells[0]);
    if (!m) {
      std::cerr << "error: unknown method in summary row " << row_no << "\n";
      return kExitDataset;
    }
    try {
      r.method = *m;
      r.alpha = std::stod(cells[1]);
      r.dataset = cells[2];
      r.runs = std::stoull(cells[3]);
      r.failures = std::stoull(cells[4]);
      r.acc_mean = std::stod(cells[5]);
      r.acc_std = std::stod(cells[6]);
      r.drift_mean = std::stod(cells[7]);
      r.delay_mean = std::stod(cells[8]);
      r.fa_mean = std::stod(cells[9]);
      r.queries_mean = std::stod(cells[10]);
    } catch (const std::exception&) {
      std::cerr << "error: malformed summary row " << row_no << "\n";
      return kExitDataset;
    }
    rows.push_back(r);
  }

  std::ostringstream body;
  if (a.markdown) {
    body << "| Method | Dataset | Accuracy | Drifts | Mean delay | False "
            "alarms |\n";
    body << "|---|---|---|---|---|---|\n";
    for (const SummaryRow& r : rows) {
      std::string label = method_label(r.method);
      if (r.method == Method::density)
        label = "(" + detail::fmt("%.1f", r.alpha) + ") " + label;
      body << "| " << label << " | " << r.dataset << " | "
           << detail::fmt("%.3f", r.acc_mean) << " ("
           << detail::fmt("%.3f", r.acc_std) << ") | "
           << detail::fmt("%.1f", r.drift_mean) << " | "
           << detail::fmt("%.1f", r.delay_mean) << " | "
           << detail::fmt("%.1f", r.fa_mean) << " |\n";
    }
  } else {
    render_summary_table(body, rows);
  }

  if (!a.events_path.empty()) {
    std::ifstream ev(a.events_path);
    if (!ev) {
      std::cerr << "error: cannot open " << a.events_path << "\n";
      return kExitDataset;
    }
    std::map<std::string, std::vector<std::string>> strips;
    bool ev_header = true;
    while (std::getline(ev, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (ev_header) {
        ev_header = false;
        continue;
      }
      const auto cells = split_csv_line(line);
      if (cells.size() != 2) continue;
      strips[cells[0]].push_back(cells[1]);
    }
    body << "\nDrift events:\n";
    for (const auto& [run, indices] : strips) {
      body << "  " << run << ":";
      for (const std::string& idx : indices) body << " " << idx;
      body << "\n";
    }
  }

  if (!a.out_path.empty()) {
    try {
      auto out = open_out(a.out_path);
      out << body.str();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitRunFailure;
    }
  }
  std::cout << body.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming concept drift toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file: [subcommand] sections, key=value");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GenerateArgs g;
  CLI::App* gen = app.add_subcommand("generate", "write a synthetic stream");
  gen->add_option("--gen", g.gen, "generator: sea|hyperplane")
      ->required()
      ->check(CLI::IsMember({"sea", "hyperplane"}));
  gen->add_option("--length", g.length, "number of instances")->required();
  gen->add_option("--seed", g.seed, "generator seed");
  gen->add_option("--drift-at", g.drift_at, "drift indices, comma separated")
      ->delimiter(',');
  gen->add_option("--noise", g.noise, "label noise probability");
  gen->add_option("--dim", g.dim, "hyperplane dimensions");
  gen->add_option("--thetas", g.thetas, "sea concept thresholds")
      ->delimiter(',');
  gen->add_option("-o,--out", g.out_path, "output CSV path");

  RunArgs r;
  CLI::App* run = app.add_subcommand("run", "single prequential experiment");
  run->add_option("--data", r.data_spec,
                  "dataset CSV, optionally path:drift1:drift2")
      ->required();
  run->add_option("--method", r.method, "density|ddm|eddm|adwin|ph");
  run->add_option("--label-budget", r.alpha, "label fraction for density");
  run->add_option("--baseline-budget", r.baseline_alpha,
                  "label fraction for baselines");
  run->add_option("--window", r.window, "window size");
  run->add_option("--kd", r.kd, "knowledge discovery: active|pu")
      ->check(CLI::IsMember({"active", "pu"}));
  run->add_option("--seed", r.seed, "run seed");
  run->add_option("--tau", r.tau, "drift threshold");
  run->add_option("--phi", r.phi, "warning threshold");
  run->add_option("--delta", r.delta, "scaling sensitivity offset");
  run->add_option("--true-drift", r.true_drift,
                  "known drift indices, comma separated")
      ->delimiter(',');
  run->add_option("--tolerance", r.tolerance, "false-alarm tolerance window");
  run->add_option("--force-gamma", r.force_gamma,
                  "override the scaling factor");
  run->add_option("--run-id", r.run_id, "output file prefix");
  run->add_option("--out", r.out_dir, "output directory");

  BenchArgs b;
  CLI::App* bench = app.add_subcommand("bench", "method x budget x dataset grid");
  bench->add_option("--data", b.data_specs,
                    "dataset CSVs, optionally path:drift1:drift2")
      ->required();
  bench->add_option("--methods", b.methods, "methods, comma separated")
      ->delimiter(',');
  bench->add_option("--budgets", b.budgets, "label budgets, comma separated")
      ->delimiter(',');
  bench->add_option("--seeds", b.seeds, "seeds, comma separated")
      ->delimiter(',');
  bench->add_option("--window", b.window, "window size");
  bench->add_option("--kd", b.kd, "knowledge discovery: active|pu")
      ->check(CLI::IsMember({"active", "pu"}));
  bench->add_option("--tau", b.tau, "drift threshold");
  bench->add_option("--phi", b.phi, "warning threshold");
  bench->add_option("--delta", b.delta, "scaling sensitivity offset");
  bench->add_option("--out", b.out_dir, "output directory");

  ReportArgs rep;
  CLI::App* report = app.add_subcommand("report", "render summary tables");
  report->add_option("--summary", rep.summary_path, "summary CSV")->required();
  report->add_option("--events", rep.events_path, "events CSV for the strip");
  report->add_option("-o,--out", rep.out_path, "also write the table here");
  report->add_flag("--markdown", rep.markdown, "markdown instead of plain text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (gen->parsed()) return cmd_generate(g);
  if (run->parsed()) return cmd_run(r);
  if (bench->parsed()) return cmd_bench(b);
  if (report->parsed()) return cmd_report(rep);
  return kExitUsage;
}
