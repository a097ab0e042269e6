#pragma once

#include <optional>
#include <string>
#include <vector>

namespace polyopt {

/// One (instance, config) benchmark run. `gap` is present iff both final
/// bounds were finite; `status` is one of optimal, timelimit, nodelimit,
/// infeasible, error.
struct RunRecord {
  std::string instance;
  std::string config;
  std::string status;
  double time_s = 0.0;
  std::optional<double> gap;
  long long nodes = 0;
  std::optional<double> lb_first;
  std::optional<double> lb_final;
  std::optional<double> ub_final;
  double btbound = 0.0;
  double bttime_s = 0.0;
};

/// Shortest round-trip decimal rendering; the one formatter every CSV in
/// this project uses, so identical data means identical bytes.
std::string format_double(double v);

void write_runs_csv(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_csv(const std::string& path);

bool record_solved(const RunRecord& r);

/// Lower-bound progress rate: time over (lb_final - lb_first), with the
/// denominator floored at 1e-9 (also when a bound is missing).
double record_pace(const RunRecord& r);

struct ConfigMetrics {
  std::string config;
  int solved = 0;
  double gap_geomean = 0.0;
  int gap_count = 0;
  double time_geomean = 0.0;
  int time_count = 0;
  double pace_geomean = 0.0;
  int pace_count = 0;
  double nodes_geomean = 0.0;
  int nodes_count = 0;
  double btbound_mean = 0.0;
  double bttime_mean = 0.0;
};

struct MetricsTable {
  std::vector<std::string> configs;
  std::vector<std::string> instances;
  std::vector<ConfigMetrics> rows;
};

/// Aggregates a rectangular instance x config grid of records (anything
/// missing or duplicated is an error). Solved counts gap <= 1e-3. Gap
/// averages geometrically over instances where every config reports a gap
/// and at least one misses it, with solved runs entered as 1e-3. Time drops
/// instances everyone solved under 5 seconds and instances nobody solved;
/// Pace drops only the former; Nodes keeps instances everyone solved.
/// Bound-tightening columns are arithmetic means over all instances.
MetricsTable compute_metrics(const std::vector<RunRecord>& records);

struct Within5Row {
  std::string metric;
  /// Per config (table order): instances on which it came within 5% of the
  /// best config's value.
  std::vector<int> counts;
};

/// Within-5%-of-best counts for Gap, Time, Pace, Nodes, BTbound, BTtime over
/// the same per-metric instance filters as compute_metrics (bound metrics
/// use every instance). BTbound is a maximized metric; the rest are
/// minimized.
std::vector<Within5Row> within_5pct(const std::vector<RunRecord>& records);

struct RankingRow {
  std::string config;
  /// rank_counts[r-1]: instances where this config's pace ranked r (ties
  /// share the better rank).
  std::vector<int> rank_counts;
  /// Mean of best-pace / own-pace among instances at each rank; 0 when the
  /// rank was never attained.
  std::vector<double> mean_ratio;
};

/// Pace ranking across configs, over all instances.
std::vector<RankingRow> ranking_report(const std::vector<RunRecord>& records);

void write_metrics_csv(const std::string& path, const MetricsTable& table);
void write_within5_csv(const std::string& path,
                       const std::vector<std::string>& configs,
                       const std::vector<Within5Row>& rows);
void write_ranking_csv(const std::string& path,
                       const std::vector<RankingRow>& rows);

}  // namespace polyopt
