#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "polyopt/obbt.hpp"
#include "polyopt/poly.hpp"
#include "polyopt/rlt.hpp"
#include "polyopt/work_clock.hpp"

namespace polyopt {

/// Where to split the selected variable's interval: at the relaxation point
/// (Ov), the interval midpoint (Mp), or their convex combination (Mix).
/// Whatever the rule, an incumbent coordinate lying comfortably inside the
/// interval takes precedence, and the final point is clamped so each child
/// keeps at least 1% of the parent width.
enum class BranchPointRule { Ov, Mp, Mix };

struct SolverConfig {
  ObbtMode obbt_mode = ObbtMode::Lp;
  double obbt_budget_fraction = 0.2;

  /// Depth cadence for applying the root dual bound cuts in propagation;
  /// disabled when absent.
  std::optional<int> ob_cut_period;
  /// Depth cadence for deriving and applying node bound cuts; disabled when
  /// absent.
  std::optional<int> nb_cut_period;

  BranchPointRule branch_point = BranchPointRule::Ov;
  /// Mix rule only: weight on the relaxation point.
  double mix_weight = 0.5;
  bool use_incumbent_branch_value = true;

  double abs_gap = 1e-3;
  double rel_gap = 1e-3;
  double time_limit = 60.0;
  std::optional<long long> node_limit;
  WorkClock::Mode clock_mode = WorkClock::Mode::Wall;
};

enum class SolveStatus { Optimal, TimeLimit, NodeLimit, Infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  /// Best feasible point found; empty when none.
  std::vector<double> incumbent;
  double upper_bound = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  /// min(U - LB, (U - LB)/|U|), clamped at zero; infinite without an
  /// incumbent. The min makes "gap closed" agree with the termination test
  /// whichever of the absolute and relative criteria fired.
  double gap = std::numeric_limits<double>::infinity();
  long long nodes = 0;
  /// First finite lower bound (the root relaxation value).
  double lb_first = std::numeric_limits<double>::quiet_NaN();
  /// (elapsed seconds, lower bound) at each improvement.
  std::vector<std::pair<double, double>> lb_trajectory;
  double btbound = 0.0;
  double bttime = 0.0;
  double time = 0.0;
};

/// Argmax of the product-consistency scores; ties take the smallest index.
int select_branch_variable(const BranchScores& scores);

/// Branch point for variable j per the configured rule; `relaxation_value`
/// is the node relaxation's value for x_j. `incumbent_j`, when given, is
/// this coordinate of the incumbent.
double select_branch_point(const SolverConfig& cfg, const Box& box, int j,
                           double relaxation_value,
                           const double* incumbent_j);

/// Spatial branch-and-bound with best-bound node selection (FIFO tie-break):
/// root propagation, one root bound-tightening pass, then per node
/// propagation with cadence cuts, the node relaxation LP, bound pruning,
/// incumbent extraction from the relaxation point, and bisection on the
/// variable with the largest product inconsistency.
SolveResult solve(const Problem& problem, const SolverConfig& cfg);

}  // namespace polyopt
