#include "polyopt/rlt.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace polyopt {

namespace {

// All divisor monomials of m with degree >= 2 (m itself included).
void collect_divisors(const Monomial& m,
                      std::set<Monomial, MonomialGradedLess>& out) {
  const auto& f = m.factors();
  std::vector<int> exps(f.size(), 0);
  while (true) {
    std::vector<std::pair<int, int>> cur;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (exps[i] > 0) cur.emplace_back(f[i].first, exps[i]);
    Monomial d = Monomial::from_exponents(cur);
    if (d.degree() >= 2) out.insert(d);
    std::size_t k = 0;
    while (k < f.size() && exps[k] == f[k].second) exps[k++] = 0;
    if (k == f.size()) break;
    ++exps[k];
  }
}

// One bound-factor product: for each variable copy of the generator, either
// (x_j - l_j) or (u_j - x_j). `low_counts[i]` copies of factor i go to the
// lower side.
Polynomial bound_factor(const Monomial& jset, const std::vector<int>& low_counts,
                        const Box& box) {
  Polynomial f = Polynomial::constant(1.0);
  const auto& factors = jset.factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    auto [j, p] = factors[i];
    auto uj = static_cast<std::size_t>(j);
    Polynomial low;
    low.add_term(Monomial::var(j), 1.0);
    low.add_term(Monomial::one(), -box.lo[uj]);
    Polynomial up;
    up.add_term(Monomial::var(j), -1.0);
    up.add_term(Monomial::one(), box.hi[uj]);
    for (int k = 0; k < low_counts[i]; ++k) f = f.times(low);
    for (int k = low_counts[i]; k < p; ++k) f = f.times(up);
  }
  return f;
}

void append_bound_factor_rows(LinearRelaxation& r, const Box& box) {
  for (const auto& jset : r.jsets) {
    const auto& factors = jset.factors();
    std::vector<int> low(factors.size(), 0);
    while (true) {
      Polynomial f = bound_factor(jset, low, box);
      auto [coefs, cst] = linearize(f, r);
      // f >= 0 linearizes to sum coefs * z >= -cst.
      if (!coefs.empty()) r.rows.push_back({std::move(coefs), RowSense::Ge, -cst});
      std::size_t k = 0;
      while (k < factors.size() &&
             low[k] == factors[k].second)
        low[k++] = 0;
      if (k == factors.size()) break;
      ++low[k];
    }
  }
}

}  // namespace

int LinearRelaxation::column(const Monomial& m) const {
  auto it = column_of.find(m);
  return it == column_of.end() ? -1 : it->second;
}

Interval monomial_range(const Monomial& m, const Box& box) {
  Interval r = Interval::point(1.0);
  for (const auto& [j, p] : m.factors()) {
    auto uj = static_cast<std::size_t>(j);
    r = r * power(Interval::of(box.lo[uj], box.hi[uj]), p);
  }
  return r;
}

std::pair<std::vector<std::pair<int, double>>, double> linearize(
    const Polynomial& poly, const LinearRelaxation& r) {
  std::vector<std::pair<int, double>> coefs;
  double cst = 0.0;
  for (const auto& [m, c] : poly.terms()) {
    if (m.is_one()) {
      cst += c;
      continue;
    }
    int col = r.column(m);
    if (col < 0) throw std::logic_error("monomial has no relaxation column: " + m.to_string());
    coefs.emplace_back(col, c);
  }
  std::sort(coefs.begin(), coefs.end());
  return {std::move(coefs), cst};
}

LinearRelaxation build_relaxation(const Problem& p, const Box& box,
                                  const std::vector<Monomial>& jsets) {
  LinearRelaxation r;
  r.num_x = p.num_vars;
  r.jsets = jsets;

  for (int j = 0; j < p.num_vars; ++j) {
    r.columns.push_back(Monomial::var(j));
    r.column_of.emplace(r.columns.back(), j);
  }
  std::set<Monomial, MonomialGradedLess> aux;
  for (const auto& jset : jsets) collect_divisors(jset, aux);
  for (const auto& m : aux) {
    r.column_of.emplace(m, r.num_cols());
    r.columns.push_back(m);
  }

  std::set<Monomial, MonomialGradedLess> present;
  auto collect_present = [&](const Polynomial& poly) {
    for (const auto& [m, c] : poly.terms())
      if (m.degree() >= 2) present.insert(m);
  };
  collect_present(p.objective);
  for (const auto& c : p.constraints) collect_present(c.body);
  r.present.assign(present.begin(), present.end());

  auto [ocoefs, ocst] = linearize(p.objective, r);
  r.obj.assign(static_cast<std::size_t>(r.num_cols()), 0.0);
  for (const auto& [col, v] : ocoefs) r.obj[static_cast<std::size_t>(col)] = v;
  r.obj_offset = ocst;

  for (const auto& c : p.constraints) {
    auto [coefs, cst] = linearize(c.body, r);
    RowSense s = c.sense == Sense::Ge ? RowSense::Ge : RowSense::Eq;
    r.rows.push_back({std::move(coefs), s, c.rhs - cst});
  }
  r.num_problem_rows = static_cast<int>(r.rows.size());

  refresh_relaxation(r, box);
  return r;
}

void refresh_relaxation(LinearRelaxation& r, const Box& box) {
  r.col_lo.resize(static_cast<std::size_t>(r.num_cols()));
  r.col_hi.resize(static_cast<std::size_t>(r.num_cols()));
  for (int c = 0; c < r.num_cols(); ++c) {
    auto uc = static_cast<std::size_t>(c);
    Interval range = monomial_range(r.columns[uc], box);
    r.col_lo[uc] = range.lo;
    r.col_hi[uc] = range.hi;
  }
  r.rows.resize(static_cast<std::size_t>(r.num_problem_rows));
  append_bound_factor_rows(r, box);
}

BranchScores rlt_violations(const LinearRelaxation& r,
                            const std::vector<double>& z) {
  BranchScores s;
  s.theta.assign(static_cast<std::size_t>(r.num_x), 0.0);
  for (const auto& m : r.present) {
    int cm = r.column(m);
    if (cm < 0) continue;
    double zm = z[static_cast<std::size_t>(cm)];
    for (int j : m.support()) {
      // Remove one copy of j from m.
      std::vector<std::pair<int, int>> exps;
      for (const auto& [v, pw] : m.factors())
        exps.emplace_back(v, v == j ? pw - 1 : pw);
      Monomial rest = Monomial::from_exponents(exps);
      int cr = rest.is_one() ? -1 : r.column(rest);
      double zr = rest.is_one() ? 1.0
                                : (cr < 0 ? 0.0 : z[static_cast<std::size_t>(cr)]);
      if (!rest.is_one() && cr < 0) continue;
      double v = std::abs(zm - z[static_cast<std::size_t>(j)] * zr);
      auto uj = static_cast<std::size_t>(j);
      if (v > s.theta[uj]) s.theta[uj] = v;
    }
  }
  for (int j = 0; j < r.num_x; ++j) {
    auto uj = static_cast<std::size_t>(j);
    if (s.theta[uj] > s.max_theta) {
      s.max_theta = s.theta[uj];
      s.argmax = j;
    }
  }
  if (s.argmax < 0 && r.num_x > 0) s.argmax = 0;
  return s;
}

}  // namespace polyopt
