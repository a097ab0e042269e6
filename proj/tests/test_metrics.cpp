#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "polyopt/metrics.hpp"

using namespace polyopt;

namespace {

RunRecord make_run(const std::string& instance, const std::string& config,
                   const std::string& status, double time_s,
                   std::optional<double> gap, long long nodes,
                   std::optional<double> lb_first, std::optional<double> lb_final,
                   double btbound, double bttime) {
  RunRecord r;
  r.instance = instance;
  r.config = config;
  r.status = status;
  r.time_s = time_s;
  r.gap = gap;
  r.nodes = nodes;
  r.lb_first = lb_first;
  r.lb_final = lb_final;
  if (gap && lb_final) r.ub_final = *lb_final + *gap;
  r.btbound = btbound;
  r.bttime_s = bttime;
  return r;
}

/// 3 configs x 3 instances exercising every aggregation filter:
///   i1: everyone solves fast, i2: only A solves, i3: nobody solves and one
///   gap is missing.
std::vector<RunRecord> golden_grid() {
  std::vector<RunRecord> rs;
  rs.push_back(make_run("i1", "A", "optimal", 1.0, 0.0005, 4, 0.0, 1.0, 0.5, 0.1));
  rs.push_back(make_run("i1", "B", "optimal", 2.0, 0.0002, 16, 0.0, 2.0, 0.3, 0.2));
  rs.push_back(make_run("i1", "C", "optimal", 4.0, 0.001, 1, 0.0, 4.0, 0.1, 0.3));

  rs.push_back(make_run("i2", "A", "optimal", 6.0, 0.0001, 10, 0.0, 3.0, 0.2, 0.4));
  rs.push_back(make_run("i2", "B", "timelimit", 60.0, 0.5, 100, 0.0, 30.0, 0.0, 0.0));
  rs.push_back(make_run("i2", "C", "timelimit", 60.0, 0.02, 50, 1.0, 31.0, 0.4, 0.5));

  rs.push_back(make_run("i3", "A", "timelimit", 60.0, std::nullopt, 200, 0.0, 6.0,
                        0.6, 0.6));
  rs.push_back(make_run("i3", "B", "timelimit", 60.0, 0.9, 300, 0.0, 0.6, 0.0, 0.1));
  rs.push_back(make_run("i3", "C", "timelimit", 60.0, 0.7, 150, 5.0, 5.0, 0.2, 0.2));
  return rs;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  return all;
}

}  // namespace

TEST_CASE("format_double renders shortest round-trip decimals") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.001) == "0.001");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-3.0) == "-3");
  for (const double v : {0.1, 1.0 / 3.0, 1e300, -2.5e-8, 6.0e10}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("record helpers classify runs") {
  RunRecord solved = make_run("i", "c", "optimal", 1.0, 1e-3, 5, 0.0, 1.0, 0, 0);
  CHECK(record_solved(solved));
  solved.gap = 0.0011;
  CHECK_FALSE(record_solved(solved));
  solved.gap = std::nullopt;
  CHECK_FALSE(record_solved(solved));

  RunRecord r = make_run("i", "c", "optimal", 6.0, 1e-4, 5, 0.0, 3.0, 0, 0);
  CHECK(record_pace(r) == doctest::Approx(2.0));
  r.lb_first = std::nullopt;
  CHECK(record_pace(r) == doctest::Approx(6.0e9));
  r.lb_first = 5.0;
  r.lb_final = 5.0;
  CHECK(record_pace(r) == doctest::Approx(6.0e9));
}

TEST_CASE("time and node averages are geometric") {
  std::vector<RunRecord> rs;
  rs.push_back(make_run("u", "D", "optimal", 40.0, 5e-4, 4, 0.0, 1.0, 0, 0));
  rs.push_back(make_run("v", "D", "optimal", 90.0, 1e-4, 9, 0.0, 1.0, 0, 0));
  rs.push_back(make_run("w", "D", "optimal", 1.0, 0.0, 0, 0.0, 1.0, 0, 0));

  const MetricsTable t = compute_metrics(rs);
  REQUIRE(t.rows.size() == 1);
  const ConfigMetrics& m = t.rows[0];
  CHECK(m.solved == 3);
  // w is excluded from Time as a universal fast solve; 40 and 90 average to 60.
  CHECK(m.time_count == 2);
  CHECK(m.time_geomean == doctest::Approx(60.0));
  // Nodes keeps all three solved instances and floors counts at one.
  CHECK(m.nodes_count == 3);
  CHECK(m.nodes_geomean == doctest::Approx(std::cbrt(36.0)));
  // Nothing qualifies for the gap column when everything solved.
  CHECK(m.gap_count == 0);
}

TEST_CASE("the golden grid aggregates per the filters") {
  const MetricsTable t = compute_metrics(golden_grid());
  REQUIRE(t.configs == std::vector<std::string>{"A", "B", "C"});
  REQUIRE(t.instances == std::vector<std::string>{"i1", "i2", "i3"});
  const ConfigMetrics& a = t.rows[0];
  const ConfigMetrics& b = t.rows[1];
  const ConfigMetrics& c = t.rows[2];

  CHECK(a.solved == 2);
  CHECK(b.solved == 1);
  CHECK(c.solved == 1);

  // Gap: only i2 has gaps everywhere without being universally solved.
  // Solved runs enter at the 1e-3 threshold.
  CHECK(a.gap_count == 1);
  CHECK(a.gap_geomean == doctest::Approx(1e-3));
  CHECK(b.gap_geomean == doctest::Approx(0.5));
  CHECK(c.gap_geomean == doctest::Approx(0.02));

  // Time: i1 is a universal fast solve, i3 a universal miss; i2 remains.
  CHECK(a.time_count == 1);
  CHECK(a.time_geomean == doctest::Approx(6.0));
  CHECK(b.time_geomean == doctest::Approx(60.0));
  CHECK(c.time_geomean == doctest::Approx(60.0));

  // Pace: i2 and i3 remain; missing bounds hit the 1e-9 denominator floor.
  CHECK(a.pace_count == 2);
  CHECK(a.pace_geomean == doctest::Approx(std::sqrt(20.0)));
  CHECK(b.pace_geomean == doctest::Approx(std::sqrt(200.0)));
  CHECK(c.pace_geomean == doctest::Approx(std::sqrt(2.0 * 6.0e10)));

  // Nodes: only the universally solved i1 counts.
  CHECK(a.nodes_count == 1);
  CHECK(a.nodes_geomean == doctest::Approx(4.0));
  CHECK(b.nodes_geomean == doctest::Approx(16.0));
  CHECK(c.nodes_geomean == doctest::Approx(1.0));

  // Bound-tightening columns are arithmetic over every instance.
  CHECK(a.btbound_mean == doctest::Approx(1.3 / 3.0));
  CHECK(b.btbound_mean == doctest::Approx(0.1));
  CHECK(c.btbound_mean == doctest::Approx(0.7 / 3.0));
  CHECK(a.bttime_mean == doctest::Approx(1.1 / 3.0));
  CHECK(b.bttime_mean == doctest::Approx(0.1));
  CHECK(c.bttime_mean == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("within-5% counts respect direction and filters") {
  const std::vector<Within5Row> rows = within_5pct(golden_grid());
  REQUIRE(rows.size() == 6);

  CHECK(rows[0].metric == "Gap");
  CHECK(rows[0].counts == std::vector<int>{1, 0, 0});
  CHECK(rows[1].metric == "Time");
  CHECK(rows[1].counts == std::vector<int>{1, 0, 0});
  CHECK(rows[2].metric == "Pace");
  CHECK(rows[2].counts == std::vector<int>{2, 1, 1});
  CHECK(rows[3].metric == "Nodes");
  CHECK(rows[3].counts == std::vector<int>{0, 0, 1});
  CHECK(rows[4].metric == "BTbound");
  CHECK(rows[4].counts == std::vector<int>{2, 0, 1});
  CHECK(rows[5].metric == "BTtime");
  CHECK(rows[5].counts == std::vector<int>{1, 2, 0});
}

TEST_CASE("a borderline value sits within 5% of the best") {
  std::vector<RunRecord> rs;
  rs.push_back(make_run("i", "A", "optimal", 10.0, 0.1, 1, 0.0, 1.0, 0, 0));
  rs.push_back(make_run("i", "B", "optimal", 10.4, 0.1, 1, 0.0, 1.0, 0, 0));
  rs.push_back(make_run("i", "C", "optimal", 11.0, 0.1, 1, 0.0, 1.0, 0, 0));
  const std::vector<Within5Row> rows = within_5pct(rs);
  CHECK(rows[1].metric == "Time");
  CHECK(rows[1].counts == std::vector<int>{1, 1, 0});
}

TEST_CASE("pace ranking shares better ranks on ties") {
  const std::vector<RankingRow> rows = ranking_report(golden_grid());
  REQUIRE(rows.size() == 3);

  CHECK(rows[0].config == "A");
  CHECK(rows[0].rank_counts == std::vector<int>{3, 0, 0});
  CHECK(rows[0].mean_ratio[0] == doctest::Approx(1.0));

  CHECK(rows[1].rank_counts == std::vector<int>{2, 1, 0});
  CHECK(rows[1].mean_ratio[0] == doctest::Approx(1.0));
  CHECK(rows[1].mean_ratio[1] == doctest::Approx(0.1));
  CHECK(rows[1].mean_ratio[2] == doctest::Approx(0.0));

  CHECK(rows[2].rank_counts == std::vector<int>{2, 0, 1});
  CHECK(rows[2].mean_ratio[2] == doctest::Approx(10.0 / 6.0e10));
}

TEST_CASE("irregular grids are rejected") {
  std::vector<RunRecord> dup = golden_grid();
  dup.push_back(dup.front());
  CHECK_THROWS_AS(compute_metrics(dup), std::runtime_error);

  std::vector<RunRecord> missing = golden_grid();
  missing.pop_back();
  CHECK_THROWS_AS(compute_metrics(missing), std::runtime_error);
}

TEST_CASE("run records survive a csv round-trip") {
  const std::string path = temp_path("polyopt_test_runs.csv");
  const std::vector<RunRecord> before = golden_grid();
  write_runs_csv(path, before);
  const std::vector<RunRecord> after = read_runs_csv(path);

  REQUIRE(after.size() == before.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(after[i].instance == before[i].instance);
    CHECK(after[i].config == before[i].config);
    CHECK(after[i].status == before[i].status);
    CHECK(after[i].time_s == before[i].time_s);
    CHECK(after[i].gap == before[i].gap);
    CHECK(after[i].nodes == before[i].nodes);
    CHECK(after[i].lb_first == before[i].lb_first);
    CHECK(after[i].lb_final == before[i].lb_final);
    CHECK(after[i].ub_final == before[i].ub_final);
    CHECK(after[i].btbound == before[i].btbound);
    CHECK(after[i].bttime_s == before[i].bttime_s);
  }
  std::filesystem::remove(path);
}

TEST_CASE("report csvs carry stable headers") {
  const std::vector<RunRecord> rs = golden_grid();

  const std::string mpath = temp_path("polyopt_test_metrics.csv");
  write_metrics_csv(mpath, compute_metrics(rs));
  CHECK(slurp(mpath).rfind("config,solved,gap_geomean,gap_count,time_geomean,"
                           "time_count,pace_geomean,pace_count,nodes_geomean,"
                           "nodes_count,btbound_mean,bttime_mean\n", 0) == 0);
  std::filesystem::remove(mpath);

  const std::string wpath = temp_path("polyopt_test_within5.csv");
  write_within5_csv(wpath, {"A", "B", "C"}, within_5pct(rs));
  const std::string wtext = slurp(wpath);
  CHECK(wtext.rfind("metric,A,B,C\n", 0) == 0);
  CHECK(wtext.find("Pace,2,1,1\n") != std::string::npos);
  std::filesystem::remove(wpath);

  const std::string rpath = temp_path("polyopt_test_ranking.csv");
  write_ranking_csv(rpath, ranking_report(rs));
  const std::string rtext = slurp(rpath);
  CHECK(rtext.rfind("config,rank,count,mean_ratio\n", 0) == 0);
  CHECK(rtext.find("A,1,3,1\n") != std::string::npos);
  CHECK(rtext.find("B,2,1,0.1\n") != std::string::npos);
  std::filesystem::remove(rpath);
}
