#include "polyopt/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>

namespace polyopt {

namespace {

// Distribution helpers are hand-rolled on top of the raw generator because
// the standard ones are not pinned across library implementations and every
// draw here must be reproducible byte for byte.
double unit_draw(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double uniform_draw(std::mt19937_64& g, double lo, double hi) {
  return lo + unit_draw(g) * (hi - lo);
}

int uniform_int_draw(std::mt19937_64& g, int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(g() % span);
}

/// First k entries of a partial Fisher-Yates shuffle of 0..n-1.
std::vector<int> draw_subset(std::mt19937_64& g, int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = uniform_int_draw(g, i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return v;
}

void enumerate_pool(std::vector<int>& exps, int var, int remaining,
                    std::vector<Monomial>& out) {
  if (var == static_cast<int>(exps.size())) {
    std::vector<std::pair<int, int>> factors;
    for (std::size_t j = 0; j < exps.size(); ++j) {
      if (exps[j] > 0) factors.emplace_back(static_cast<int>(j), exps[j]);
    }
    out.push_back(Monomial::from_exponents(factors));
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    exps[static_cast<std::size_t>(var)] = e;
    enumerate_pool(exps, var + 1, remaining - e, out);
  }
  exps[static_cast<std::size_t>(var)] = 0;
}

Polynomial sample_body(std::mt19937_64& g, const std::vector<Monomial>& monos) {
  const int avail = static_cast<int>(monos.size());
  const int size = uniform_int_draw(g, 1, avail);
  const std::vector<int> picked = draw_subset(g, avail, size);
  Polynomial body;
  for (const int i : picked) {
    body.add_term(monos[static_cast<std::size_t>(i)], uniform_draw(g, -10.0, 10.0));
  }
  return body;
}

}  // namespace

std::vector<Monomial> monomial_pool(int num_vars, int max_degree) {
  std::vector<Monomial> pool;
  std::vector<int> exps(static_cast<std::size_t>(num_vars), 0);
  enumerate_pool(exps, 0, max_degree, pool);
  std::sort(pool.begin(), pool.end(), MonomialGradedLess{});
  return pool;
}

Problem generate_instance(int num_vars, int degree, double density,
                          std::uint64_t seed, std::vector<double>* anchor_out) {
  std::mt19937_64 g(seed);
  const std::vector<Monomial> pool = monomial_pool(num_vars, degree);

  const double target = density * binomial(num_vars + degree - 1, degree);
  int count = static_cast<int>(std::ceil(target));
  count = std::clamp(count, 1, static_cast<int>(pool.size()));

  std::vector<Monomial> monos;
  for (const int i : draw_subset(g, static_cast<int>(pool.size()), count)) {
    monos.push_back(pool[static_cast<std::size_t>(i)]);
  }

  std::vector<double> anchor(static_cast<std::size_t>(num_vars));
  for (double& a : anchor) a = uniform_draw(g, 0.1, 0.9);

  Problem p;
  p.num_vars = num_vars;
  p.box.lo.assign(static_cast<std::size_t>(num_vars), 0.0);
  p.box.hi.assign(static_cast<std::size_t>(num_vars), 1.0);
  p.objective = sample_body(g, monos);

  const int num_cons = uniform_int_draw(g, 2, 5);
  for (int i = 0; i < num_cons; ++i) {
    Constraint c;
    c.body = sample_body(g, monos);
    c.sense = unit_draw(g) < 0.7 ? Sense::Ge : Sense::Eq;
    c.rhs = c.body.evaluate(anchor);
    p.constraints.push_back(std::move(c));
  }
  if (anchor_out) *anchor_out = anchor;
  return p;
}

}  // namespace polyopt
