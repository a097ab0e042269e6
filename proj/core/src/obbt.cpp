#include "polyopt/obbt.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>

#include "polyopt/simplex.hpp"

namespace polyopt {

namespace {

constexpr double kBoundSlack = 1e-9;
const double kSqrt2 = std::sqrt(2.0);

/// Resolves a monomial to a global column, appending an extra column when
/// the linear relaxation has none for it.
struct ColumnExtender {
  const LinearRelaxation& r;
  ConicAugmentation& aug;
  std::map<Monomial, int, MonomialGradedLess> extra_of;

  int operator()(const Monomial& m) {
    const int c = r.column(m);
    if (c >= 0) return c;
    auto it = extra_of.find(m);
    if (it != extra_of.end()) return it->second;
    const int idx = r.num_cols() + static_cast<int>(aug.extra_columns.size());
    aug.extra_columns.push_back(m);
    extra_of.emplace(m, idx);
    return idx;
  }
};

}  // namespace

ConicAugmentation add_socp_rows(const LinearRelaxation& r) {
  ConicAugmentation aug;
  ColumnExtender col{r, aug, {}};
  std::set<std::pair<int, int>> seen;
  for (const Monomial& jset : r.jsets) {
    const std::vector<int> support = jset.support();
    for (std::size_t a = 0; a < support.size(); ++a) {
      for (std::size_t b = a + 1; b < support.size(); ++b) {
        const std::pair<int, int> key{support[a], support[b]};
        if (!seen.insert(key).second) continue;
        const int cii = col(Monomial::var(key.first, 2));
        const int cjj = col(Monomial::var(key.second, 2));
        const int cij = col(Monomial::from_vars({key.first, key.second}));
        aug.rows.push_back({{cii, -0.5}, {cjj, -0.5}});
        aug.h.push_back(0.0);
        aug.rows.push_back({{cij, -1.0}});
        aug.h.push_back(0.0);
        aug.rows.push_back({{cii, -0.5}, {cjj, 0.5}});
        aug.h.push_back(0.0);
        aug.blocks.push_back(ConeBlock{ConeType::SecondOrder, 3, 0});
      }
    }
  }
  return aug;
}

ConicAugmentation add_sdp_rows(const LinearRelaxation& r, bool bordered) {
  ConicAugmentation aug;
  ColumnExtender col{r, aug, {}};
  std::set<std::vector<int>> seen;
  for (const Monomial& jset : r.jsets) {
    const std::vector<int> support = jset.support();
    if (!seen.insert(support).second) continue;
    const int s = static_cast<int>(support.size());
    const int side = bordered ? s + 1 : s;
    // Scaled symmetric vectorization, column-major upper triangle.
    for (int jj = 0; jj < side; ++jj) {
      for (int ii = 0; ii <= jj; ++ii) {
        const double scale = ii == jj ? 1.0 : kSqrt2;
        if (bordered && ii == 0 && jj == 0) {
          aug.rows.push_back({});
          aug.h.push_back(1.0);
          continue;
        }
        if (bordered && ii == 0) {
          const int v = support[static_cast<std::size_t>(jj - 1)];
          aug.rows.push_back({{v, -scale}});
          aug.h.push_back(0.0);
          continue;
        }
        const int va = support[static_cast<std::size_t>(bordered ? ii - 1 : ii)];
        const int vb = support[static_cast<std::size_t>(bordered ? jj - 1 : jj)];
        const Monomial m = va == vb ? Monomial::var(va, 2)
                                    : Monomial::from_vars({va, vb});
        aug.rows.push_back({{col(m), -scale}});
        aug.h.push_back(0.0);
      }
    }
    aug.blocks.push_back(ConeBlock{ConeType::Psd, side * (side + 1) / 2, side});
  }
  return aug;
}

namespace {

/// Builds the conic form of the bound-tightening subproblem: equality rows,
/// then a nonnegative block (>= rows, column boxes, optional cutoff), then
/// the conic augmentation.
ConicProblem assemble_conic(const LinearRelaxation& r, const ConicAugmentation& aug,
                            const LpProblem& lp, const Box& box,
                            const std::vector<double>& cost,
                            std::optional<double> cutoff) {
  ConicProblem cp;
  const int num_extra = static_cast<int>(aug.extra_columns.size());
  cp.num_cols = r.num_cols() + num_extra;
  cp.c.assign(static_cast<std::size_t>(cp.num_cols), 0.0);
  std::copy(cost.begin(), cost.end(), cp.c.begin());

  cp.col_lo = lp.lo;
  cp.col_hi = lp.hi;
  for (const Monomial& m : aug.extra_columns) {
    const Interval rng = monomial_range(m, box);
    cp.col_lo.push_back(rng.lo);
    cp.col_hi.push_back(rng.hi);
  }

  int num_eq = 0;
  for (const LinRow& row : lp.rows) {
    if (row.sense != RowSense::Eq) continue;
    cp.rows.push_back(row.coefs);
    cp.h.push_back(row.rhs);
    ++num_eq;
  }
  if (num_eq > 0) cp.cones.push_back(ConeBlock{ConeType::Zero, num_eq, 0});

  int num_pos = 0;
  for (const LinRow& row : lp.rows) {
    if (row.sense == RowSense::Eq) continue;
    const double flip = row.sense == RowSense::Ge ? -1.0 : 1.0;
    std::vector<std::pair<int, double>> coefs = row.coefs;
    for (auto& [c, v] : coefs) v *= flip;
    cp.rows.push_back(std::move(coefs));
    cp.h.push_back(flip * row.rhs);
    ++num_pos;
  }
  for (int j = 0; j < cp.num_cols; ++j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    cp.rows.push_back({{j, -1.0}});
    cp.h.push_back(-cp.col_lo[sj]);
    cp.rows.push_back({{j, 1.0}});
    cp.h.push_back(cp.col_hi[sj]);
    num_pos += 2;
  }
  if (cutoff) {
    std::vector<std::pair<int, double>> coefs;
    for (int j = 0; j < r.num_cols(); ++j) {
      const double v = r.obj[static_cast<std::size_t>(j)];
      if (v != 0.0) coefs.emplace_back(j, v);
    }
    cp.rows.push_back(std::move(coefs));
    cp.h.push_back(*cutoff - r.obj_offset);
    ++num_pos;
  }
  cp.cones.push_back(ConeBlock{ConeType::NonNeg, num_pos, 0});

  for (std::size_t b = 0; b < aug.blocks.size(); ++b) {
    cp.cones.push_back(aug.blocks[b]);
  }
  for (std::size_t i = 0; i < aug.rows.size(); ++i) {
    cp.rows.push_back(aug.rows[i]);
    cp.h.push_back(aug.h[i]);
  }
  return cp;
}

}  // namespace

ObbtReport run_obbt(const Problem& problem, LinearRelaxation& r, const Box& box,
                    ObbtMode mode, double budget_seconds,
                    std::optional<double> incumbent_value, WorkClock& clock) {
  (void)problem;
  ObbtReport report;
  report.box = box;
  const std::size_t n = box.size();
  report.width_before.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    report.width_before[j] = box.hi[j] - box.lo[j];
  }

  const double t0 = clock.elapsed();
  const bool has_cutoff = incumbent_value.has_value();

  LpProblem lp = make_lp(r, std::vector<double>(static_cast<std::size_t>(r.num_cols()), 0.0));
  if (has_cutoff) {
    LinRow row;
    for (int j = 0; j < r.num_cols(); ++j) {
      const double v = r.obj[static_cast<std::size_t>(j)];
      if (v != 0.0) row.coefs.emplace_back(j, v);
    }
    row.sense = RowSense::Le;
    row.rhs = *incumbent_value - r.obj_offset;
    lp.rows.push_back(std::move(row));
  }

  ConicAugmentation aug;
  if (mode == ObbtMode::Socp) aug = add_socp_rows(r);
  if (mode == ObbtMode::Sdp1) aug = add_sdp_rows(r, false);
  if (mode == ObbtMode::Sdp2) aug = add_sdp_rows(r, true);

  std::vector<double> cost(static_cast<std::size_t>(r.num_cols()), 0.0);
  bool out_of_time = false;
  for (std::size_t j = 0; j < n && !report.proven_infeasible && !out_of_time; ++j) {
    for (int side = 0; side < 2; ++side) {
      if (clock.elapsed() - t0 >= budget_seconds) {
        out_of_time = true;
        break;
      }
      const bool lower_side = side == 0;
      cost[j] = lower_side ? 1.0 : -1.0;
      lp.cost = cost;

      double bound = -std::numeric_limits<double>::infinity();
      bool have_bound = false;
      bool infeasible = false;
      if (mode == ObbtMode::Lp) {
        const LpResult res = solve_lp(lp);
        clock.add_ticks(res.iterations + 1);
        ++report.subproblems;
        if (res.status == LpStatus::Optimal) {
          bound = res.dual_objective;
          have_bound = true;
          const double cur = lower_side ? lp.lo[j] : lp.hi[j];
          auto cut = derive_ob_cut(lp, res, r.columns, static_cast<int>(j),
                                   lower_side, has_cutoff, cur);
          if (cut) report.ob_cuts.push_back(std::move(*cut));
        } else if (res.status == LpStatus::Infeasible) {
          infeasible = true;
        }
      } else {
        const ConicProblem cp = assemble_conic(r, aug, lp, report.box, cost,
                                               incumbent_value);
        const ConicResult res = solve_conic(cp);
        clock.add_ticks(res.iterations + 1);
        ++report.subproblems;
        if (res.status == ConicStatus::Infeasible) {
          const LpResult fb = solve_lp(lp);
          clock.add_ticks(fb.iterations + 1);
          if (fb.status == LpStatus::Optimal) {
            bound = fb.dual_objective;
            have_bound = true;
          } else if (fb.status == LpStatus::Infeasible) {
            infeasible = true;
          }
        } else if (std::isfinite(res.certified_bound)) {
          bound = res.certified_bound;
          have_bound = true;
        }
      }
      cost[j] = 0.0;

      if (infeasible) {
        report.proven_infeasible = true;
        break;
      }
      if (!have_bound) continue;

      if (lower_side) {
        const double new_lo = std::min(bound - kBoundSlack, lp.hi[j]);
        if (new_lo > lp.lo[j]) {
          lp.lo[j] = new_lo;
          report.box.lo[j] = new_lo;
        }
      } else {
        const double new_hi = std::max(-bound + kBoundSlack, lp.lo[j]);
        if (new_hi < lp.hi[j]) {
          lp.hi[j] = new_hi;
          report.box.hi[j] = new_hi;
        }
      }
    }
    // Later subproblems see the tightened product-column ranges as well.
    for (int c = r.num_x; c < r.num_cols(); ++c) {
      const std::size_t sc = static_cast<std::size_t>(c);
      const Interval rng = monomial_range(r.columns[sc], report.box);
      lp.lo[sc] = rng.lo;
      lp.hi[sc] = rng.hi;
    }
  }

  report.width_after.resize(n);
  double total_rel = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    report.width_after[j] = report.box.hi[j] - report.box.lo[j];
    if (report.width_before[j] > 1e-12) {
      const double rel =
          (report.width_before[j] - report.width_after[j]) / report.width_before[j];
      total_rel += std::clamp(rel, 0.0, 1.0);
    }
  }
  report.btbound = n > 0 ? total_rel / static_cast<double>(n) : 0.0;
  report.bttime = clock.elapsed() - t0;

  refresh_relaxation(r, report.box);
  return report;
}

}  // namespace polyopt
