#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polyopt/poly.hpp"
#include "polyopt/simplex.hpp"

namespace polyopt {

/// Bound cut harvested from the dual solution of a bound-tightening LP.
/// For a cut on the lower side of variable k it encodes
///   x_k >= sum_j r[j] * m_j(x) + lambda' b - mu * U,
/// where m_j are the relaxation's column monomials, b the captured row
/// right-hand sides and U the incumbent value at materialization time; the
/// upper side mirrors with +mu * U. mu >= 0 always, so the cut tightens
/// monotonically as the incumbent improves.
struct ObCut {
  int var = 0;
  bool lower_side = true;
  /// Sparse reduced-cost vector over relaxation column monomials.
  std::vector<std::pair<Monomial, double>> coefs;
  /// lambda' b, folded into a constant because the rows it came from are
  /// fixed at derivation time.
  double dual_base = 0.0;
  /// Multiplier on the objective-cutoff row; zero when no cutoff row was
  /// present in the subproblem.
  double mu = 0.0;
};

/// Bound cut from a node relaxation optimum L: a nonbasic variable with
/// bound multiplier mu admits
///   x_k >= bound_value - (U - L) / mu   (column was at its upper bound)
///   x_k <= bound_value + (U - L) / mu   (column was at its lower bound).
/// L is captured at derivation; only U is read at materialization time.
struct NbCut {
  int var = 0;
  bool from_upper = true;
  double mu = 0.0;
  double bound_value = 0.0;
  double lp_bound = 0.0;
};

/// Constraint-side analogue of NbCut: a constraint with dual multiplier y
/// at a node optimum L bounds its own body once an incumbent U exists.
struct RowCut {
  int constraint = 0;
  /// true: body <= rhs + (U - L) / mu. false: body >= rhs - (U - L) / mu.
  bool upper_side = true;
  double mu = 0.0;
  double lp_bound = 0.0;
};

struct CutPool {
  std::vector<ObCut> ob_cuts;
  std::vector<NbCut> nb_cuts;
  std::vector<RowCut> row_cuts;

  bool empty() const { return ob_cuts.empty() && nb_cuts.empty() && row_cuts.empty(); }
};

/// Extracts an ObCut from an optimal bound-tightening LP for column `var`.
/// `lp` must be the solved problem: relaxation rows first, then (iff
/// `has_cutoff`) one objective-cutoff row last. `columns` maps LP columns to
/// monomials. `lower_side` identifies which bound was probed; the max-side
/// probe minimizes -x_k, and the stored data absorbs the sign flip so that
/// the encoded inequality above holds as written.
///
/// Coefficients below 1e-9 in magnitude are dropped. A cut that reduces to a
/// constant (no coefficients, mu = 0) is returned only if it beats
/// `current_bound` on its side; anything else is kept.
std::optional<ObCut> derive_ob_cut(const LpProblem& lp, const LpResult& res,
                                   const std::vector<Monomial>& columns, int var,
                                   bool lower_side, bool has_cutoff,
                                   double current_bound);

/// Renders an ObCut as a >= polynomial constraint given the incumbent value.
/// Cuts with mu = 0 are valid without an incumbent; pass U = 0 for those.
Constraint materialize_ob_cut(const ObCut& cut, double incumbent_value);

/// Scans an optimal node LP for nonbasic original-variable columns with
/// bound multiplier above 1e-7 and returns one NbCut each. `lp_bound` is the
/// node relaxation optimum in original objective units.
std::vector<NbCut> derive_nb_cuts(const LpProblem& lp, const LpResult& res,
                                  int num_vars, double lp_bound);

/// New bound implied by an NbCut under incumbent U (requires U >= lp_bound):
/// returns the lower bound for a from-upper cut, the upper bound otherwise.
double nb_cut_bound(const NbCut& cut, double incumbent_value);

/// Scans the duals of the original constraint rows (the first
/// `problem.constraints.size()` rows of the node LP, in order) for
/// multipliers above 1e-7. Equality rows yield a cut on the side their dual
/// sign selects; >= rows only ever cap the body from above.
std::vector<RowCut> derive_row_cuts(const Problem& problem, const LpResult& res,
                                    double lp_bound);

/// Renders a RowCut as a >= polynomial constraint on the original
/// constraint's body under incumbent U.
Constraint materialize_row_cut(const RowCut& cut, const Problem& problem,
                               double incumbent_value);

}  // namespace polyopt
