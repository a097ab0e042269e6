#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polyopt/conic.hpp"
#include "polyopt/cuts.hpp"
#include "polyopt/rlt.hpp"
#include "polyopt/work_clock.hpp"

namespace polyopt {

/// Relaxation used for the bound-tightening subproblems. Lp is the plain
/// linear relaxation; the other modes append conic rows to it.
enum class ObbtMode { Lp, Socp, Sdp1, Sdp2 };

/// Conic rows appended to the linear relaxation. Row column indices are
/// global: relaxation columns first, then `extra_columns` in order. Extra
/// columns are product monomials the linear relaxation did not need; their
/// bounds come from interval products over the current box.
struct ConicAugmentation {
  std::vector<Monomial> extra_columns;
  std::vector<ConeBlock> blocks;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> h;
};

/// One rotated-cone triple per unordered variable pair within a product
/// term's support, deduplicated across terms:
///   (X_ii + X_jj)/2, X_ij, (X_ii - X_jj)/2) in the second-order cone,
/// which linearizes X_ii * X_jj >= X_ij^2 with X_ii + X_jj >= 0. Pure-power
/// terms have no pair and contribute nothing.
ConicAugmentation add_socp_rows(const LinearRelaxation& r);

/// One semidefinite block per distinct product-term support. Plain blocks
/// require the moment matrix X restricted to the support to be PSD;
/// `bordered` prepends the constant row/column [[1, x'], [x, X]], which
/// dominates the plain block and implies the rotated-cone constraints.
ConicAugmentation add_sdp_rows(const LinearRelaxation& r, bool bordered);

struct ObbtReport {
  Box box;
  std::vector<double> width_before;
  std::vector<double> width_after;
  /// Mean relative width reduction across variables, in [0, 1].
  double btbound = 0.0;
  /// Clock seconds spent in the pass.
  double bttime = 0.0;
  /// Dual bound cuts harvested from Lp-mode subproblems.
  std::vector<ObCut> ob_cuts;
  int subproblems = 0;
  /// A subproblem was infeasible: no point in the box beats the incumbent
  /// (or the box is empty when there is none).
  bool proven_infeasible = false;
};

/// One ascending-variable-order pass of optimization-based bound tightening:
/// min then max per variable, each bound moved to the subproblem's certified
/// dual value less a 1e-9 slack. Updated bounds feed into later subproblems
/// within the pass. Stops when `budget_seconds` of clock time is exhausted
/// (the subproblem in flight finishes). When `incumbent_value` is present an
/// objective-cutoff row joins every subproblem. Conic subproblems that
/// report infeasible fall back to the plain LP; iteration-capped ones
/// contribute their safety-margin bound only when it improves. On return
/// `r`'s column bounds and bound-factor rows are rebuilt for the final box.
ObbtReport run_obbt(const Problem& problem, LinearRelaxation& r, const Box& box,
                    ObbtMode mode, double budget_seconds,
                    std::optional<double> incumbent_value, WorkClock& clock);

}  // namespace polyopt
