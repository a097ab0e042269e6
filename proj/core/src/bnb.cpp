#include "polyopt/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>

#include "polyopt/cuts.hpp"
#include "polyopt/fbbt.hpp"
#include "polyopt/simplex.hpp"

namespace polyopt {

namespace {

constexpr double kFeasTol = 1e-6;
constexpr double kThetaTol = 1e-6;
constexpr double kInteriorFrac = 0.01;
const double kInf = std::numeric_limits<double>::infinity();

struct Node {
  Box box;
  double lb = -kInf;
  int depth = 0;
  long long seq = 0;
  std::vector<NbCut> nb_cuts;
  std::vector<RowCut> row_cuts;
};

struct NodeWorse {
  bool operator()(const Node& a, const Node& b) const {
    if (a.lb != b.lb) return a.lb > b.lb;
    return a.seq > b.seq;
  }
};

bool is_feasible(const Problem& p, const std::vector<double>& x) {
  for (const Constraint& c : p.constraints) {
    const double v = c.body.evaluate(x);
    if (c.sense == Sense::Ge ? v < c.rhs - kFeasTol
                             : std::abs(v - c.rhs) > kFeasTol)
      return false;
  }
  return true;
}

double closed_gap(double ub, double lb) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  const double diff = std::max(ub - lb, 0.0);
  if (std::abs(ub) > 0.0) return std::min(diff, diff / std::abs(ub));
  return diff;
}

}  // namespace

int select_branch_variable(const BranchScores& scores) { return scores.argmax; }

double select_branch_point(const SolverConfig& cfg, const Box& box, int j,
                           double relaxation_value, const double* incumbent_j) {
  const std::size_t sj = static_cast<std::size_t>(j);
  const double lo = box.lo[sj];
  const double hi = box.hi[sj];
  const double margin = kInteriorFrac * (hi - lo);

  double point;
  switch (cfg.branch_point) {
    case BranchPointRule::Ov:
      point = relaxation_value;
      break;
    case BranchPointRule::Mp:
      point = 0.5 * (lo + hi);
      break;
    case BranchPointRule::Mix:
      point = cfg.mix_weight * relaxation_value +
              (1.0 - cfg.mix_weight) * 0.5 * (lo + hi);
      break;
  }
  if (cfg.use_incumbent_branch_value && incumbent_j != nullptr &&
      *incumbent_j >= lo + margin && *incumbent_j <= hi - margin) {
    point = *incumbent_j;
  }
  return std::clamp(point, lo + margin, hi - margin);
}

SolveResult solve(const Problem& problem, const SolverConfig& cfg) {
  problem.validate();
  WorkClock clock(cfg.clock_mode);
  SolveResult out;
  const int n = problem.num_vars;

  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.gap = closed_gap(out.upper_bound, out.lower_bound);
    out.time = clock.elapsed();
    return out;
  };

  // Root pipeline: propagate, tighten bounds, then search.
  FbbtResult root_fb =
      fbbt_fixpoint(problem, problem.box, CutPool{}, std::nullopt, std::nullopt);
  clock.add_ticks(root_fb.sweeps + 1);
  if (root_fb.empty) return finish(SolveStatus::Infeasible);

  LinearRelaxation relax =
      build_relaxation(problem, root_fb.box, compute_jsets(problem));
  ObbtReport obbt =
      run_obbt(problem, relax, root_fb.box, cfg.obbt_mode,
               cfg.obbt_budget_fraction * cfg.time_limit, std::nullopt, clock);
  out.btbound = obbt.btbound;
  out.bttime = obbt.bttime;
  if (obbt.proven_infeasible) return finish(SolveStatus::Infeasible);
  std::vector<ObCut> ob_cuts = std::move(obbt.ob_cuts);

  std::priority_queue<Node, std::vector<Node>, NodeWorse> open;
  long long next_seq = 0;
  open.push(Node{obbt.box, -kInf, 0, next_seq++, {}, {}});

  while (!open.empty()) {
    if (std::isfinite(open.top().lb)) {
      out.lower_bound = std::max(out.lower_bound, open.top().lb);
    }
    if (out.lb_trajectory.empty() ||
        out.lower_bound > out.lb_trajectory.back().second + 1e-12) {
      if (std::isfinite(out.lower_bound)) {
        out.lb_trajectory.emplace_back(clock.elapsed(), out.lower_bound);
      }
    }
    const double ub_lb = out.upper_bound - out.lower_bound;
    if (std::isfinite(ub_lb) &&
        (ub_lb <= cfg.abs_gap ||
         (std::abs(out.upper_bound) > 0.0 &&
          ub_lb / std::abs(out.upper_bound) <= cfg.rel_gap))) {
      return finish(SolveStatus::Optimal);
    }
    if (clock.elapsed() >= cfg.time_limit) return finish(SolveStatus::TimeLimit);
    if (cfg.node_limit && out.nodes >= *cfg.node_limit) {
      return finish(SolveStatus::NodeLimit);
    }

    Node node = open.top();
    open.pop();
    ++out.nodes;
    if (node.lb >= out.upper_bound - cfg.abs_gap) continue;

    const bool ob_on =
        cfg.ob_cut_period && node.depth % *cfg.ob_cut_period == 0;
    const bool nb_on =
        cfg.nb_cut_period && node.depth % *cfg.nb_cut_period == 0;
    std::optional<double> ub;
    if (std::isfinite(out.upper_bound)) ub = out.upper_bound;

    CutPool pool;
    if (ob_on) pool.ob_cuts = ob_cuts;
    if (nb_on) {
      pool.nb_cuts = node.nb_cuts;
      pool.row_cuts = node.row_cuts;
    }
    std::optional<double> node_lb_opt;
    if (std::isfinite(node.lb)) node_lb_opt = node.lb;
    FbbtResult fb = fbbt_fixpoint(problem, node.box, pool, ub, node_lb_opt);
    clock.add_ticks(fb.sweeps + 1);
    if (fb.empty) continue;
    node.box = fb.box;

    refresh_relaxation(relax, node.box);
    const LpProblem lp = make_lp(relax);
    const LpResult res = solve_lp(lp);
    clock.add_ticks(res.iterations + 1);
    if (res.status == LpStatus::Infeasible) continue;
    if (res.status == LpStatus::Unbounded) continue;

    double node_lb = res.status == LpStatus::Optimal
                         ? res.objective + relax.obj_offset
                         : res.dual_objective + relax.obj_offset;
    node_lb = std::max(node_lb, node.lb);
    if (node.depth == 0 && std::isfinite(node_lb)) out.lb_first = node_lb;

    // The relaxation's x-part, pushed into the node box, is the incumbent
    // candidate.
    std::vector<double> x(res.x.begin(), res.x.begin() + n);
    for (int j = 0; j < n; ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      x[sj] = std::clamp(x[sj], node.box.lo[sj], node.box.hi[sj]);
    }
    if (res.status == LpStatus::Optimal && is_feasible(problem, x)) {
      const double value = problem.objective.evaluate(x);
      if (value < out.upper_bound) {
        out.upper_bound = value;
        out.incumbent = x;
      }
    }
    if (node_lb >= out.upper_bound - cfg.abs_gap) continue;

    const BranchScores scores = rlt_violations(relax, res.x);
    if (scores.max_theta <= kThetaTol) continue;

    if (nb_on && res.status == LpStatus::Optimal) {
      const double certified = res.dual_objective + relax.obj_offset;
      std::vector<NbCut> nb = derive_nb_cuts(lp, res, n, certified);
      node.nb_cuts.insert(node.nb_cuts.end(), nb.begin(), nb.end());
      std::vector<RowCut> rc = derive_row_cuts(problem, res, certified);
      node.row_cuts.insert(node.row_cuts.end(), rc.begin(), rc.end());
    }

    const int bj = select_branch_variable(scores);
    const std::size_t sbj = static_cast<std::size_t>(bj);
    const double* inc_j = out.incumbent.empty() ? nullptr : &out.incumbent[sbj];
    const double point =
        select_branch_point(cfg, node.box, bj, res.x[sbj], inc_j);

    Node left{node.box,     node_lb,       node.depth + 1,
              next_seq++,   node.nb_cuts,  node.row_cuts};
    left.box.hi[sbj] = point;
    Node right{node.box,    node_lb,       node.depth + 1,
               next_seq++,  std::move(node.nb_cuts), std::move(node.row_cuts)};
    right.box.lo[sbj] = point;
    open.push(std::move(left));
    open.push(std::move(right));
  }

  if (!out.incumbent.empty()) {
    out.lower_bound = out.upper_bound;
    return finish(SolveStatus::Optimal);
  }
  return finish(SolveStatus::Infeasible);
}

}  // namespace polyopt
