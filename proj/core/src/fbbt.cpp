#include "polyopt/fbbt.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace polyopt {

namespace {

constexpr double kWidthFloor = 1e-10;
constexpr double kEmptyTol = 1e-9;
constexpr double kRelStop = 1e-4;
constexpr int kMaxSweeps = 10;

Interval var_interval(const Box& box, int j) {
  const std::size_t sj = static_cast<std::size_t>(j);
  return Interval{box.lo[sj], box.hi[sj]};
}

Interval monomial_interval(const Monomial& m, const Box& box) {
  Interval r = Interval::point(1.0);
  for (const auto& [j, p] : m.factors()) r = r * power(var_interval(box, j), p);
  return r;
}

/// Intersects variable j with `cand`. Returns false on an empty
/// intersection; skips the actual update below the width floor.
/// Candidates are computed in plain double arithmetic, so on instances whose
/// feasible set pins a variable to a point the two sides can cross by a few
/// ulps. Crossings within kEmptyTol (relative) collapse to a point instead of
/// being reported empty, which keeps the pass sound to ~1e-9.
bool apply_candidate(Box& box, int j, const Interval& cand) {
  const std::size_t sj = static_cast<std::size_t>(j);
  const Interval cur = var_interval(box, j);
  Interval next = intersect(cur, cand);
  if (next.is_empty()) {
    const double scale = std::max({1.0, std::fabs(next.lo), std::fabs(next.hi)});
    if (next.lo - next.hi > kEmptyTol * scale) return false;
    const double mid = std::clamp(0.5 * (next.lo + next.hi), cur.lo, cur.hi);
    next = Interval::point(mid);
  }
  if (cur.width() > kWidthFloor) {
    box.lo[sj] = next.lo;
    box.hi[sj] = next.hi;
  }
  return true;
}

}  // namespace

Interval interval_eval(const Polynomial& p, const Box& box) {
  Interval total = Interval::point(0.0);
  for (const auto& [m, c] : p.terms()) total = total + c * monomial_interval(m, box);
  return total;
}

bool propagate_constraint(const Polynomial& body, Sense sense, double rhs,
                          Box& box) {
  const Interval target = sense == Sense::Eq
                              ? Interval::point(rhs)
                              : Interval{rhs, std::numeric_limits<double>::infinity()};

  std::vector<const Monomial*> monos;
  std::vector<double> coefs;
  std::vector<Interval> vals;
  for (const auto& [m, c] : body.terms()) {
    monos.push_back(&m);
    coefs.push_back(c);
    vals.push_back(c * monomial_interval(m, box));
  }
  const std::size_t nt = vals.size();

  Interval total = Interval::point(0.0);
  for (const Interval& v : vals) total = total + v;
  const Interval meet = intersect(total, target);
  if (meet.is_empty()) {
    const double scale = std::max({1.0, std::fabs(meet.lo), std::fabs(meet.hi)});
    return meet.lo - meet.hi <= kEmptyTol * scale;
  }

  // Enclosures of partial sums; prefix[t] + suffix[t] covers all terms but t.
  std::vector<Interval> prefix(nt + 1, Interval::point(0.0));
  std::vector<Interval> suffix(nt + 1, Interval::point(0.0));
  for (std::size_t t = 0; t < nt; ++t) prefix[t + 1] = prefix[t] + vals[t];
  for (std::size_t t = nt; t-- > 0;) suffix[t] = suffix[t + 1] + vals[t];

  for (std::size_t t = 0; t < nt; ++t) {
    if (monos[t]->is_one()) continue;
    const Interval others = prefix[t] + suffix[t + 1];
    const Interval mono_target = (1.0 / coefs[t]) * (target - others);
    const auto& factors = monos[t]->factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const auto [j, p] = factors[f];
      Interval cofactor = Interval::point(1.0);
      for (std::size_t g = 0; g < factors.size(); ++g) {
        if (g == f) continue;
        cofactor = cofactor * power(var_interval(box, factors[g].first),
                                    factors[g].second);
      }
      if (cofactor.contains_zero()) continue;
      Interval powered = divide(mono_target, cofactor);
      if (p % 2 == 0 && powered.hi < 0.0) {
        const double scale = std::max(1.0, std::fabs(powered.lo));
        if (-powered.hi > kEmptyTol * scale) return false;
        powered.hi = 0.0;
        powered.lo = std::min(powered.lo, 0.0);
      }
      const Interval rooted = root(powered, p);
      if (rooted.is_empty()) return false;
      Interval cand = rooted;
      if (p % 2 == 0) {
        const Interval cur = var_interval(box, j);
        if (cur.hi <= 0.0) {
          cand = Interval{-rooted.hi, -rooted.lo};
        } else if (cur.lo < 0.0) {
          continue;
        }
      }
      if (!apply_candidate(box, j, cand)) return false;
    }
  }
  return true;
}

FbbtResult fbbt_fixpoint(const Problem& problem, Box box, const CutPool& pool,
                         std::optional<double> incumbent_value,
                         std::optional<double> /*node_bound*/) {
  FbbtResult out;

  // Bound-multiplier cuts are plain interval updates; apply them up front.
  if (incumbent_value) {
    for (const NbCut& cut : pool.nb_cuts) {
      if (*incumbent_value < cut.lp_bound) continue;
      const double b = nb_cut_bound(cut, *incumbent_value);
      const double inf = std::numeric_limits<double>::infinity();
      const Interval cand =
          cut.from_upper ? Interval{b, inf} : Interval{-inf, b};
      if (!apply_candidate(box, cut.var, cand)) {
        out.box = box;
        out.empty = true;
        return out;
      }
    }
  }

  std::vector<Constraint> cut_rows;
  for (const ObCut& cut : pool.ob_cuts) {
    if (cut.mu > 0.0 && !incumbent_value) continue;
    cut_rows.push_back(materialize_ob_cut(cut, incumbent_value.value_or(0.0)));
  }
  if (incumbent_value) {
    for (const RowCut& cut : pool.row_cuts) {
      if (*incumbent_value < cut.lp_bound) continue;
      cut_rows.push_back(materialize_row_cut(cut, problem, *incumbent_value));
    }
  }

  const std::size_t n = box.size();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    std::vector<double> width_before(n);
    for (std::size_t j = 0; j < n; ++j) width_before[j] = box.hi[j] - box.lo[j];

    bool ok = true;
    for (const Constraint& c : problem.constraints) {
      if (!propagate_constraint(c.body, c.sense, c.rhs, box)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (const Constraint& c : cut_rows) {
        if (!propagate_constraint(c.body, c.sense, c.rhs, box)) {
          ok = false;
          break;
        }
      }
    }
    ++out.sweeps;
    if (!ok) {
      out.box = box;
      out.empty = true;
      return out;
    }

    double max_rel = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (width_before[j] <= kWidthFloor) continue;
      const double rel = (width_before[j] - (box.hi[j] - box.lo[j])) / width_before[j];
      max_rel = std::max(max_rel, rel);
    }
    if (max_rel < kRelStop) break;
  }

  out.box = box;
  return out;
}

}  // namespace polyopt
