#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "polyopt/bnb.hpp"
#include "polyopt/config.hpp"
#include "polyopt/features.hpp"
#include "polyopt/instance_gen.hpp"
#include "polyopt/metrics.hpp"
#include "polyopt/poly_io.hpp"
#include "polyopt/qrf.hpp"

namespace fs = std::filesystem;
using namespace polyopt;

namespace {

constexpr int kExitSolverError = 1;
constexpr int kExitUsageError = 2;

WorkClock::Mode clock_mode(const std::string& name) {
  if (name == "wall") return WorkClock::Mode::Wall;
  if (name == "ticks") return WorkClock::Mode::Ticks;
  throw std::invalid_argument("unknown clock mode '" + name + "'");
}

std::vector<fs::path> poly_files(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".poly") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::invalid_argument("no .poly files in " + dir);
  }
  return files;
}

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::TimeLimit: return "timelimit";
    case SolveStatus::NodeLimit: return "nodelimit";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "error";
}

struct SolveArgs {
  std::string file;
  std::string config = "baseline";
  double time_limit = 60.0;
  std::optional<long long> node_limit;
  std::string clock = "wall";
};

int run_solve(const SolveArgs& args) {
  const ParsedInstance parsed = parse_poly1_file(args.file);
  SolverConfig cfg = parse_config(args.config);
  cfg.time_limit = args.time_limit;
  cfg.node_limit = args.node_limit;
  cfg.clock_mode = clock_mode(args.clock);

  const SolveResult res = solve(parsed.problem, cfg);
  std::cout << "status: " << status_name(res.status) << '\n';
  if (!res.incumbent.empty()) {
    std::cout << "objective: " << format_double(res.upper_bound) << '\n';
  }
  if (std::isfinite(res.lower_bound)) {
    std::cout << "bound: " << format_double(res.lower_bound) << '\n';
  }
  if (std::isfinite(res.gap)) {
    std::cout << "gap: " << format_double(res.gap) << '\n';
  }
  std::cout << "nodes: " << res.nodes << '\n';
  std::cout << "time_s: " << format_double(res.time) << '\n';
  for (std::size_t j = 0; j < res.incumbent.size(); ++j) {
    std::cout << "x" << j << " = "
              << format_double(res.incumbent[j] + parsed.shift[j]) << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::string dir;
  std::string configs;
  int workers = 1;
  double time_limit = 60.0;
  std::optional<long long> node_limit;
  std::uint64_t seed = 1;  // reserved; solver runs are deterministic
  std::string out = "runs.csv";
  std::string clock = "ticks";
};

RunRecord run_cell(const fs::path& file, const std::string& config_name,
                   const BenchArgs& args) {
  RunRecord rec;
  rec.instance = file.stem().string();
  rec.config = config_name;
  try {
    const ParsedInstance parsed = parse_poly1_file(file.string());
    SolverConfig cfg = parse_config(config_name);
    cfg.time_limit = args.time_limit;
    cfg.node_limit = args.node_limit;
    cfg.clock_mode = clock_mode(args.clock);
    const SolveResult res = solve(parsed.problem, cfg);
    rec.status = status_name(res.status);
    rec.time_s = res.time;
    if (std::isfinite(res.gap)) rec.gap = res.gap;
    rec.nodes = res.nodes;
    if (std::isfinite(res.lb_first)) rec.lb_first = res.lb_first;
    if (std::isfinite(res.lower_bound)) rec.lb_final = res.lower_bound;
    if (std::isfinite(res.upper_bound)) rec.ub_final = res.upper_bound;
    rec.btbound = res.btbound;
    rec.bttime_s = res.bttime;
  } catch (const std::exception&) {
    rec.status = "error";
  }
  return rec;
}

int run_bench(const BenchArgs& args) {
  const std::vector<fs::path> files = poly_files(args.dir);
  std::vector<std::string> configs;
  if (args.configs.empty()) {
    configs = default_config_set();
  } else {
    std::size_t pos = 0;
    while (pos <= args.configs.size()) {
      const std::size_t next = args.configs.find(',', pos);
      configs.push_back(args.configs.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos));
      pos = next == std::string::npos ? args.configs.size() + 1 : next + 1;
    }
  }
  for (const std::string& c : configs) parse_config(c);  // validate up front

  const std::size_t cells = files.size() * configs.size();
  std::vector<RunRecord> records(cells);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= cells) break;
      const fs::path& file = files[k / configs.size()];
      const std::string& config_name = configs[k % configs.size()];
      records[k] = run_cell(file, config_name, args);
    }
  };
  const int nw = std::max(args.workers, 1);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  write_runs_csv(args.out, records);
  return 0;
}

struct GenArgs {
  std::string out_dir;
  int count = 1;
  int nvars = 3;
  int degree = 2;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::string prefix = "instance";
};

int run_gen(const GenArgs& args) {
  fs::create_directories(args.out_dir);
  for (int i = 0; i < args.count; ++i) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
    const Problem p = generate_instance(args.nvars, args.degree, args.density, seed);
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04llu.poly", args.prefix.c_str(),
                  static_cast<unsigned long long>(seed));
    write_poly1_file((fs::path(args.out_dir) / name).string(), p);
  }
  return 0;
}

int run_features(const std::string& dir, const std::string& out) {
  std::vector<std::string> instances;
  std::vector<std::vector<double>> rows;
  for (const fs::path& file : poly_files(dir)) {
    const ParsedInstance parsed = parse_poly1_file(file.string());
    instances.push_back(file.stem().string());
    rows.push_back(extract_features(parsed.problem));
  }
  write_features_csv(out, instances, rows);
  return 0;
}

struct TrainArgs {
  std::string runs;
  std::string features;
  double tau = 0.3;
  int trees = 500;
  std::uint64_t seed = 1;
  std::string out = "model.qrf";
};

int run_train(const TrainArgs& args) {
  const std::vector<RunRecord> records = read_runs_csv(args.runs);
  const auto [instances, rows] = read_features_csv(args.features);
  const ConfigSelector sel =
      train_selector(records, instances, rows, args.tau, args.trees, args.seed);
  save_selector(args.out, sel);
  return 0;
}

int run_select(const std::string& model, const std::string& features,
               const std::string& out) {
  const ConfigSelector sel = load_selector(model);
  const auto [instances, rows] = read_features_csv(features);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write " + out);
  os << "instance,config,predicted_pace\n";
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::vector<double> paces = predict_paces(sel, rows[i], instances[i]);
    std::size_t best = 0;
    for (std::size_t c = 1; c < paces.size(); ++c) {
      if (paces[c] < paces[best]) best = c;
    }
    os << instances[i] << ',' << sel.configs[best] << ','
       << format_double(paces[best]) << '\n';
  }
  return 0;
}

int run_metrics(const std::string& runs, const std::string& out) {
  const std::vector<RunRecord> records = read_runs_csv(runs);
  const MetricsTable table = compute_metrics(records);
  write_metrics_csv(out, table);
  const fs::path dir = fs::path(out).parent_path();
  write_within5_csv((dir / "within5.csv").string(), table.configs,
                    within_5pct(records));
  write_ranking_csv((dir / "ranking.csv").string(), ranking_report(records));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global solver for box-constrained polynomial programs"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Solve one .poly instance");
  cmd_solve->add_option("file", solve_args.file, "instance file")->required();
  cmd_solve->add_option("--config", solve_args.config, "solver configuration name");
  cmd_solve->add_option("--time-limit", solve_args.time_limit, "seconds");
  long long solve_nodes = -1;
  cmd_solve->add_option("--node-limit", solve_nodes, "node cap");
  cmd_solve->add_option("--clock", solve_args.clock, "wall|ticks (default wall)");

  BenchArgs bench_args;
  CLI::App* cmd_bench =
      app.add_subcommand("bench", "Run a config set over an instance directory");
  cmd_bench->add_option("dir", bench_args.dir, "instance directory")->required();
  cmd_bench->add_option("--configs", bench_args.configs,
                        "comma-separated config names (default: the benchmark set)");
  cmd_bench->add_option("--workers", bench_args.workers, "worker threads");
  cmd_bench->add_option("--time-limit", bench_args.time_limit, "seconds per run");
  long long bench_nodes = -1;
  cmd_bench->add_option("--node-limit", bench_nodes, "node cap per run");
  cmd_bench->add_option("--seed", bench_args.seed,
                        "reserved; runs are deterministic");
  cmd_bench->add_option("--out", bench_args.out, "output csv path");
  cmd_bench->add_option("--clock", bench_args.clock,
                        "wall|ticks (default ticks, which makes output byte-stable)");

  GenArgs gen_args;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Generate random instances");
  cmd_gen->add_option("--out", gen_args.out_dir, "output directory")->required();
  cmd_gen->add_option("--count", gen_args.count, "instances to generate");
  cmd_gen->add_option("--nvars", gen_args.nvars, "variables");
  cmd_gen->add_option("--degree", gen_args.degree, "maximum degree");
  cmd_gen->add_option("--density", gen_args.density, "monomial density");
  cmd_gen->add_option("--seed", gen_args.seed, "seed of the first instance");
  cmd_gen->add_option("--prefix", gen_args.prefix, "file name prefix");

  std::string feat_dir, feat_out = "features.csv";
  CLI::App* cmd_features =
      app.add_subcommand("features", "Extract instance features to csv");
  cmd_features->add_option("dir", feat_dir, "instance directory")->required();
  cmd_features->add_option("--out", feat_out, "output csv path");

  TrainArgs train_args;
  CLI::App* cmd_train =
      app.add_subcommand("train", "Train the configuration selector");
  cmd_train->add_option("--runs", train_args.runs, "runs csv")->required();
  cmd_train->add_option("--features", train_args.features, "features csv")->required();
  cmd_train->add_option("--tau", train_args.tau, "pace quantile");
  cmd_train->add_option("--trees", train_args.trees, "trees per forest");
  cmd_train->add_option("--seed", train_args.seed, "training seed");
  cmd_train->add_option("--out", train_args.out, "model output path");

  std::string sel_model, sel_features, sel_out = "selection.csv";
  CLI::App* cmd_select =
      app.add_subcommand("select", "Pick a configuration per instance");
  cmd_select->add_option("--model", sel_model, "model file")->required();
  cmd_select->add_option("--features", sel_features, "features csv")->required();
  cmd_select->add_option("--out", sel_out, "output csv path");

  std::string metrics_runs, metrics_out = "metrics.csv";
  CLI::App* cmd_metrics = app.add_subcommand(
      "metrics", "Aggregate runs csv (also writes within5.csv and ranking.csv)");
  cmd_metrics->add_option("--runs", metrics_runs, "runs csv")->required();
  cmd_metrics->add_option("--out", metrics_out, "metrics csv path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  if (solve_nodes >= 0) solve_args.node_limit = solve_nodes;
  if (bench_nodes >= 0) bench_args.node_limit = bench_nodes;

  try {
    if (cmd_solve->parsed()) return run_solve(solve_args);
    if (cmd_bench->parsed()) return run_bench(bench_args);
    if (cmd_gen->parsed()) return run_gen(gen_args);
    if (cmd_features->parsed()) return run_features(feat_dir, feat_out);
    if (cmd_train->parsed()) return run_train(train_args);
    if (cmd_select->parsed()) return run_select(sel_model, sel_features, sel_out);
    if (cmd_metrics->parsed()) return run_metrics(metrics_runs, metrics_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverError;
  }
  return kExitUsageError;
}
