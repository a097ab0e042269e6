#pragma once

#include <map>
#include <utility>
#include <vector>

#include "polyopt/interval.hpp"
#include "polyopt/poly.hpp"

namespace polyopt {

enum class RowSense : std::uint8_t { Ge, Le, Eq };

/// Sparse linear row over relaxation columns, entries sorted by column.
struct LinRow {
  std::vector<std::pair<int, double>> coefs;
  RowSense sense = RowSense::Ge;
  double rhs = 0.0;
};

/// Linear relaxation of a polynomial program in the lifted monomial space.
/// Columns [0, num_x) are the original variables; the remaining columns are
/// one auxiliary per distinct monomial of degree >= 2 that divides some
/// generator monomial, in graded-lex order. Rows are the linearized problem
/// constraints followed by the bound-factor rows.
struct LinearRelaxation {
  int num_x = 0;
  std::vector<Monomial> columns;
  std::map<Monomial, int, MonomialGradedLess> column_of;
  std::vector<Monomial> jsets;

  std::vector<double> obj;
  double obj_offset = 0.0;

  std::vector<LinRow> rows;
  int num_problem_rows = 0;

  std::vector<double> col_lo;
  std::vector<double> col_hi;

  /// Monomials of degree >= 2 appearing in the original problem, used for
  /// the product-consistency branching scores.
  std::vector<Monomial> present;

  int num_cols() const { return static_cast<int>(columns.size()); }
  int column(const Monomial& m) const;
};

/// Natural interval range of a monomial over the box.
Interval monomial_range(const Monomial& m, const Box& box);

/// Maps a polynomial to (sparse row over relaxation columns, constant term).
/// Every non-constant monomial must have a column.
std::pair<std::vector<std::pair<int, double>>, double> linearize(
    const Polynomial& poly, const LinearRelaxation& r);

LinearRelaxation build_relaxation(const Problem& p, const Box& box,
                                  const std::vector<Monomial>& jsets);

/// Recomputes column bounds and regenerates the bound-factor rows for a new
/// box. Problem rows are unchanged.
void refresh_relaxation(LinearRelaxation& r, const Box& box);

struct BranchScores {
  std::vector<double> theta;
  double max_theta = 0.0;
  int argmax = -1;
};

/// Per-variable product-consistency violations at a relaxation point z:
/// theta_j = max over problem monomials M containing j of
/// |z_M - z_j * z_{M without one copy of j}|. Ties in the argmax go to the
/// smallest variable index.
BranchScores rlt_violations(const LinearRelaxation& r,
                            const std::vector<double>& z);

}  // namespace polyopt
