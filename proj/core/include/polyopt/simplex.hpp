#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "polyopt/rlt.hpp"

namespace polyopt {

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterLimit };

/// min cost'x  s.t. rows, lo <= x <= u. Bounds may be infinite.
struct LpProblem {
  int num_cols = 0;
  std::vector<double> cost;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<LinRow> rows;
};

/// Column basis state in the returned solution.
enum class ColStatus : std::uint8_t { Basic, AtLo, AtHi };

struct LpResult {
  LpStatus status = LpStatus::IterLimit;
  double objective = std::numeric_limits<double>::quiet_NaN();
  /// Certified lower bound on the optimum computed from the returned duals;
  /// equals `objective` up to tolerances when status is Optimal.
  double dual_objective = -std::numeric_limits<double>::infinity();
  std::vector<double> x;
  /// Row duals for the minimization problem: >= 0 on Ge rows, <= 0 on Le
  /// rows, free on Eq rows. Sign-clamped so the certificate is valid as is.
  std::vector<double> y;
  std::vector<double> reduced_cost;
  std::vector<ColStatus> col_status;
  int iterations = 0;
};

/// Bounded-variable revised simplex. Dantzig pricing with a Bland fallback
/// after a run of degenerate pivots, product-form eta updates on top of a
/// dense LU of the basis, refactorized every 100 pivots.
LpResult solve_lp(const LpProblem& lp);

/// LP over the relaxation columns with the relaxation objective. The
/// returned objective values do NOT include r.obj_offset.
LpProblem make_lp(const LinearRelaxation& r);

/// Same rows and bounds, custom objective (used by bound-tightening probes).
LpProblem make_lp(const LinearRelaxation& r, const std::vector<double>& cost);

}  // namespace polyopt
