#include "polyopt/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace polyopt {

namespace {

constexpr double kSolvedGap = 1e-3;
constexpr double kFastSolve = 5.0;
constexpr double kPaceFloor = 1e-9;

std::string opt_field(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "";
  return format_double(*v);
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::runtime_error("bad numeric field '" + s + "'");
  }
  return v;
}

double parse_num(const std::string& s) {
  const auto v = parse_opt(s);
  if (!v) throw std::runtime_error("empty numeric field");
  return *v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(',', pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

double geomean(const std::vector<double>& vals) {
  if (vals.empty()) return 0.0;
  double s = 0.0;
  for (const double v : vals) s += std::log(std::max(v, 1e-12));
  return std::exp(s / static_cast<double>(vals.size()));
}

/// Rectangular view: grid[i][c] indexes records by instance i, config c.
struct Grid {
  std::vector<std::string> configs;
  std::vector<std::string> instances;
  std::vector<std::vector<const RunRecord*>> cells;
};

Grid build_grid(const std::vector<RunRecord>& records) {
  Grid g;
  std::map<std::string, std::size_t> config_of, instance_of;
  for (const RunRecord& r : records) {
    if (config_of.emplace(r.config, g.configs.size()).second) {
      g.configs.push_back(r.config);
    }
    if (instance_of.emplace(r.instance, g.instances.size()).second) {
      g.instances.push_back(r.instance);
    }
  }
  g.cells.assign(g.instances.size(),
                 std::vector<const RunRecord*>(g.configs.size(), nullptr));
  for (const RunRecord& r : records) {
    auto& cell = g.cells[instance_of[r.instance]][config_of[r.config]];
    if (cell != nullptr) {
      throw std::runtime_error("duplicate run record for " + r.instance + " / " +
                               r.config);
    }
    cell = &r;
  }
  for (std::size_t i = 0; i < g.instances.size(); ++i) {
    for (std::size_t c = 0; c < g.configs.size(); ++c) {
      if (g.cells[i][c] == nullptr) {
        throw std::runtime_error("missing run record for " + g.instances[i] +
                                 " / " + g.configs[c]);
      }
    }
  }
  return g;
}

bool all_solved(const Grid& g, std::size_t i) {
  for (const RunRecord* r : g.cells[i]) {
    if (!record_solved(*r)) return false;
  }
  return true;
}

bool all_fast_solved(const Grid& g, std::size_t i) {
  for (const RunRecord* r : g.cells[i]) {
    if (!record_solved(*r) || r->time_s >= kFastSolve) return false;
  }
  return true;
}

bool none_solved(const Grid& g, std::size_t i) {
  for (const RunRecord* r : g.cells[i]) {
    if (record_solved(*r)) return false;
  }
  return true;
}

bool all_have_gap(const Grid& g, std::size_t i) {
  for (const RunRecord* r : g.cells[i]) {
    if (!r->gap) return false;
  }
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void write_runs_csv(const std::string& path,
                    const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "instance,config,status,time_s,gap,nodes,lb_first,lb_final,ub_final,"
         "btbound,bttime_s\n";
  for (const RunRecord& r : records) {
    out << r.instance << ',' << r.config << ',' << r.status << ','
        << format_double(r.time_s) << ',' << opt_field(r.gap) << ',' << r.nodes
        << ',' << opt_field(r.lb_first) << ',' << opt_field(r.lb_final) << ','
        << opt_field(r.ub_final) << ',' << format_double(r.btbound) << ','
        << format_double(r.bttime_s) << '\n';
  }
}

std::vector<RunRecord> read_runs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv " + path);
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 11) {
      throw std::runtime_error("bad runs.csv row: " + line);
    }
    RunRecord r;
    r.instance = f[0];
    r.config = f[1];
    r.status = f[2];
    r.time_s = parse_num(f[3]);
    r.gap = parse_opt(f[4]);
    r.nodes = static_cast<long long>(parse_num(f[5]));
    r.lb_first = parse_opt(f[6]);
    r.lb_final = parse_opt(f[7]);
    r.ub_final = parse_opt(f[8]);
    r.btbound = parse_num(f[9]);
    r.bttime_s = parse_num(f[10]);
    records.push_back(std::move(r));
  }
  return records;
}

bool record_solved(const RunRecord& r) { return r.gap && *r.gap <= kSolvedGap; }

double record_pace(const RunRecord& r) {
  double denom = kPaceFloor;
  if (r.lb_first && r.lb_final) {
    denom = std::max(*r.lb_final - *r.lb_first, kPaceFloor);
  }
  return r.time_s / denom;
}

MetricsTable compute_metrics(const std::vector<RunRecord>& records) {
  const Grid g = build_grid(records);
  MetricsTable table;
  table.configs = g.configs;
  table.instances = g.instances;

  const std::size_t nc = g.configs.size();
  const std::size_t ni = g.instances.size();
  for (std::size_t c = 0; c < nc; ++c) {
    ConfigMetrics m;
    m.config = g.configs[c];
    std::vector<double> gaps, times, paces, nodes;
    for (std::size_t i = 0; i < ni; ++i) {
      const RunRecord& r = *g.cells[i][c];
      if (record_solved(r)) ++m.solved;
      if (all_have_gap(g, i) && !all_solved(g, i)) {
        gaps.push_back(record_solved(r) ? kSolvedGap : *r.gap);
      }
      if (!all_fast_solved(g, i) && !none_solved(g, i)) {
        times.push_back(std::max(r.time_s, kPaceFloor));
      }
      if (!all_fast_solved(g, i)) {
        paces.push_back(std::max(record_pace(r), 1e-12));
      }
      if (all_solved(g, i)) {
        nodes.push_back(static_cast<double>(std::max(r.nodes, 1LL)));
      }
      m.btbound_mean += r.btbound;
      m.bttime_mean += r.bttime_s;
    }
    m.gap_geomean = geomean(gaps);
    m.gap_count = static_cast<int>(gaps.size());
    m.time_geomean = geomean(times);
    m.time_count = static_cast<int>(times.size());
    m.pace_geomean = geomean(paces);
    m.pace_count = static_cast<int>(paces.size());
    m.nodes_geomean = geomean(nodes);
    m.nodes_count = static_cast<int>(nodes.size());
    if (ni > 0) {
      m.btbound_mean /= static_cast<double>(ni);
      m.bttime_mean /= static_cast<double>(ni);
    }
    table.rows.push_back(std::move(m));
  }
  return table;
}

std::vector<Within5Row> within_5pct(const std::vector<RunRecord>& records) {
  const Grid g = build_grid(records);
  const std::size_t nc = g.configs.size();
  const std::size_t ni = g.instances.size();

  // value extractor + instance filter + direction per metric
  struct Metric {
    std::string name;
    bool maximize;
  };
  const std::vector<Metric> metrics = {{"Gap", false},   {"Time", false},
                                       {"Pace", false},  {"Nodes", false},
                                       {"BTbound", true}, {"BTtime", false}};

  std::vector<Within5Row> rows;
  for (const Metric& metric : metrics) {
    Within5Row row;
    row.metric = metric.name;
    row.counts.assign(nc, 0);
    for (std::size_t i = 0; i < ni; ++i) {
      std::vector<double> vals(nc);
      bool keep = true;
      for (std::size_t c = 0; c < nc && keep; ++c) {
        const RunRecord& r = *g.cells[i][c];
        if (metric.name == "Gap") {
          keep = all_have_gap(g, i) && !all_solved(g, i);
          if (keep) vals[c] = record_solved(r) ? kSolvedGap : *r.gap;
        } else if (metric.name == "Time") {
          keep = !all_fast_solved(g, i) && !none_solved(g, i);
          if (keep) vals[c] = std::max(r.time_s, kPaceFloor);
        } else if (metric.name == "Pace") {
          keep = !all_fast_solved(g, i);
          if (keep) vals[c] = std::max(record_pace(r), 1e-12);
        } else if (metric.name == "Nodes") {
          keep = all_solved(g, i);
          if (keep) vals[c] = static_cast<double>(std::max(r.nodes, 1LL));
        } else if (metric.name == "BTbound") {
          vals[c] = r.btbound;
        } else {
          vals[c] = r.bttime_s;
        }
      }
      if (!keep) continue;
      const double best = metric.maximize
                              ? *std::max_element(vals.begin(), vals.end())
                              : *std::min_element(vals.begin(), vals.end());
      for (std::size_t c = 0; c < nc; ++c) {
        const bool within =
            metric.maximize ? vals[c] >= 0.95 * best : vals[c] <= 1.05 * best;
        if (within) ++row.counts[c];
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RankingRow> ranking_report(const std::vector<RunRecord>& records) {
  const Grid g = build_grid(records);
  const std::size_t nc = g.configs.size();
  const std::size_t ni = g.instances.size();

  std::vector<RankingRow> rows(nc);
  std::vector<std::vector<double>> ratio_sums(nc, std::vector<double>(nc, 0.0));
  for (std::size_t c = 0; c < nc; ++c) {
    rows[c].config = g.configs[c];
    rows[c].rank_counts.assign(nc, 0);
    rows[c].mean_ratio.assign(nc, 0.0);
  }

  for (std::size_t i = 0; i < ni; ++i) {
    std::vector<double> pace(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      pace[c] = std::max(record_pace(*g.cells[i][c]), 1e-12);
    }
    const double best = *std::min_element(pace.begin(), pace.end());
    for (std::size_t c = 0; c < nc; ++c) {
      std::size_t rank = 0;
      for (std::size_t d = 0; d < nc; ++d) {
        if (pace[d] < pace[c]) ++rank;
      }
      ++rows[c].rank_counts[rank];
      ratio_sums[c][rank] += best / pace[c];
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t r = 0; r < nc; ++r) {
      if (rows[c].rank_counts[r] > 0) {
        rows[c].mean_ratio[r] =
            ratio_sums[c][r] / static_cast<double>(rows[c].rank_counts[r]);
      }
    }
  }
  return rows;
}

void write_metrics_csv(const std::string& path, const MetricsTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "config,solved,gap_geomean,gap_count,time_geomean,time_count,"
         "pace_geomean,pace_count,nodes_geomean,nodes_count,btbound_mean,"
         "bttime_mean\n";
  for (const ConfigMetrics& m : table.rows) {
    out << m.config << ',' << m.solved << ',' << format_double(m.gap_geomean)
        << ',' << m.gap_count << ',' << format_double(m.time_geomean) << ','
        << m.time_count << ',' << format_double(m.pace_geomean) << ','
        << m.pace_count << ',' << format_double(m.nodes_geomean) << ','
        << m.nodes_count << ',' << format_double(m.btbound_mean) << ','
        << format_double(m.bttime_mean) << '\n';
  }
}

void write_within5_csv(const std::string& path,
                       const std::vector<std::string>& configs,
                       const std::vector<Within5Row>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "metric";
  for (const std::string& c : configs) out << ',' << c;
  out << '\n';
  for (const Within5Row& row : rows) {
    out << row.metric;
    for (const int v : row.counts) out << ',' << v;
    out << '\n';
  }
}

void write_ranking_csv(const std::string& path,
                       const std::vector<RankingRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "config,rank,count,mean_ratio\n";
  for (const RankingRow& row : rows) {
    for (std::size_t r = 0; r < row.rank_counts.size(); ++r) {
      out << row.config << ',' << r + 1 << ',' << row.rank_counts[r] << ','
          << format_double(row.mean_ratio[r]) << '\n';
    }
  }
}

}  // namespace polyopt
