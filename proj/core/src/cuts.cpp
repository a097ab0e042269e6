#include "polyopt/cuts.hpp"

#include <cmath>
#include <cstddef>

namespace polyopt {

namespace {

constexpr double kCoefTol = 1e-9;
constexpr double kMultiplierTol = 1e-7;

}  // namespace

std::optional<ObCut> derive_ob_cut(const LpProblem& lp, const LpResult& res,
                                   const std::vector<Monomial>& columns, int var,
                                   bool lower_side, bool has_cutoff,
                                   double current_bound) {
  if (res.status != LpStatus::Optimal) return std::nullopt;
  const double sign = lower_side ? 1.0 : -1.0;
  const std::size_t num_rows = lp.rows.size();
  const std::size_t num_plain = has_cutoff ? num_rows - 1 : num_rows;

  ObCut cut;
  cut.var = var;
  cut.lower_side = lower_side;
  cut.mu = 0.0;
  if (has_cutoff) {
    // The cutoff row is c'x <= U, so its multiplier is nonpositive; the cut
    // stores its magnitude on both sides.
    cut.mu = std::max(0.0, -res.y[num_rows - 1]);
  }
  cut.dual_base = 0.0;
  for (std::size_t i = 0; i < num_plain; ++i) {
    cut.dual_base += sign * res.y[i] * lp.rows[i].rhs;
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const double r = sign * res.reduced_cost[j];
    if (std::abs(r) > kCoefTol) cut.coefs.emplace_back(columns[j], r);
  }

  if (cut.coefs.empty() && cut.mu <= 0.0) {
    // Constant cut: worth keeping only as a strict bound improvement.
    const bool tightens = lower_side ? cut.dual_base > current_bound
                                     : cut.dual_base < current_bound;
    if (!tightens) return std::nullopt;
  }
  return cut;
}

Constraint materialize_ob_cut(const ObCut& cut, double incumbent_value) {
  Polynomial body;
  const double sign = cut.lower_side ? 1.0 : -1.0;
  body.add_term(Monomial::var(cut.var), sign);
  for (const auto& [m, c] : cut.coefs) body.add_term(m, -sign * c);
  const double rhs = sign * cut.dual_base - cut.mu * incumbent_value;
  return Constraint{std::move(body), Sense::Ge, rhs};
}

std::vector<NbCut> derive_nb_cuts(const LpProblem& lp, const LpResult& res,
                                  int num_vars, double lp_bound) {
  std::vector<NbCut> cuts;
  if (res.status != LpStatus::Optimal) return cuts;
  for (int j = 0; j < num_vars; ++j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    if (lp.hi[sj] - lp.lo[sj] <= 1e-12) continue;
    const double rc = res.reduced_cost[sj];
    if (res.col_status[sj] == ColStatus::AtHi && rc <= -kMultiplierTol) {
      cuts.push_back(NbCut{j, true, -rc, lp.hi[sj], lp_bound});
    } else if (res.col_status[sj] == ColStatus::AtLo && rc >= kMultiplierTol) {
      cuts.push_back(NbCut{j, false, rc, lp.lo[sj], lp_bound});
    }
  }
  return cuts;
}

double nb_cut_bound(const NbCut& cut, double incumbent_value) {
  const double slack = (incumbent_value - cut.lp_bound) / cut.mu;
  return cut.from_upper ? cut.bound_value - slack : cut.bound_value + slack;
}

std::vector<RowCut> derive_row_cuts(const Problem& problem, const LpResult& res,
                                    double lp_bound) {
  std::vector<RowCut> cuts;
  if (res.status != LpStatus::Optimal) return cuts;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const double y = res.y[i];
    const Sense sense = problem.constraints[i].sense;
    if (y > kMultiplierTol) {
      cuts.push_back(RowCut{static_cast<int>(i), true, y, lp_bound});
    } else if (sense == Sense::Eq && y < -kMultiplierTol) {
      cuts.push_back(RowCut{static_cast<int>(i), false, -y, lp_bound});
    }
  }
  return cuts;
}

Constraint materialize_row_cut(const RowCut& cut, const Problem& problem,
                               double incumbent_value) {
  const Constraint& c =
      problem.constraints[static_cast<std::size_t>(cut.constraint)];
  const double slack = (incumbent_value - cut.lp_bound) / cut.mu;
  if (cut.upper_side) {
    return Constraint{c.body.scaled(-1.0), Sense::Ge, -c.rhs - slack};
  }
  return Constraint{c.body, Sense::Ge, c.rhs - slack};
}

}  // namespace polyopt
