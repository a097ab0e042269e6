#include "support/oracles.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>

namespace polyopt::oracle {

namespace {

constexpr double kTol = 1e-9;

/// Dense standard-form tableau: min c's s.t. As = b, s >= 0, b >= 0.
/// Basis handling and pivoting are the textbook versions; Bland's rule
/// guarantees termination.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), a_(rows, std::vector<double>(cols, 0.0)), b_(rows, 0.0), basis_(rows, -1) {}

  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<int> basis_;
  int m_;
  int n_;

  void pivot(int r, int c) {
    const double piv = a_[r][c];
    for (int j = 0; j < n_; ++j) a_[r][j] /= piv;
    b_[r] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = a_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j < n_; ++j) a_[i][j] -= f * a_[r][j];
      b_[i] -= f * b_[r];
    }
    basis_[r] = c;
  }

  /// Minimizes cost over the current feasible tableau. Returns false on
  /// unboundedness.
  bool run(const std::vector<double>& cost, const std::vector<bool>& allowed) {
    for (;;) {
      std::vector<double> red = cost;
      double base = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double cb = cost[static_cast<std::size_t>(basis_[i])];
        if (cb == 0.0) continue;
        base += cb * b_[i];
        for (int j = 0; j < n_; ++j) red[static_cast<std::size_t>(j)] -= cb * a_[i][j];
      }
      (void)base;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        if (red[static_cast<std::size_t>(j)] < -kTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (a_[i][enter] > kTol) {
          const double ratio = b_[i] / a_[i][enter];
          if (ratio < best - kTol ||
              (ratio < best + kTol && (leave < 0 || basis_[i] < basis_[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) v += cost[static_cast<std::size_t>(basis_[i])] * b_[i];
    return v;
  }
};

double penalized(const Problem& p, const std::vector<double>& x, double rho) {
  double v = p.objective.evaluate(x);
  for (const Constraint& c : p.constraints) {
    const double body = c.body.evaluate(x);
    const double viol = c.sense == Sense::Ge ? std::max(0.0, c.rhs - body)
                                             : std::fabs(body - c.rhs);
    v += rho * viol * viol;
  }
  return v;
}

/// Zooming local minimization of the escalating-penalty objective: a 5^n
/// stencil around the current point, shrinking whenever the center wins.
std::vector<double> zoom_refine(const Problem& p, std::vector<double> x,
                                double half_width) {
  const int n = p.num_vars;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double rho = 1e4;
  for (int round = 0; round < 90; ++round) {
    std::vector<double> best_x = x;
    double best_v = penalized(p, x, rho);
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      std::vector<double> cand(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        const double off = (idx[static_cast<std::size_t>(j)] - 2) * 0.5 * half_width;
        cand[static_cast<std::size_t>(j)] =
            std::clamp(x[static_cast<std::size_t>(j)] + off, p.box.lo[static_cast<std::size_t>(j)],
                       p.box.hi[static_cast<std::size_t>(j)]);
      }
      const double v = penalized(p, cand, rho);
      if (v < best_v) {
        best_v = v;
        best_x = cand;
      }
      int j = 0;
      while (j < n && ++idx[static_cast<std::size_t>(j)] == 5) {
        idx[static_cast<std::size_t>(j)] = 0;
        ++j;
      }
      if (j == n) break;
    }
    if (best_x == x) half_width *= 0.5;
    x = best_x;
    rho = std::min(rho * 2.0, 1e12);
    if (half_width < 1e-13) break;
  }
  return x;
}

}  // namespace

LpAnswer solve_lp_tableau(const LpProblem& lp) {
  const int n = lp.num_cols;
  for (int j = 0; j < n; ++j) {
    assert(std::isfinite(lp.lo[static_cast<std::size_t>(j)]) &&
           std::isfinite(lp.hi[static_cast<std::size_t>(j)]));
  }

  // Shift to s = x - lo >= 0 and collect rows; finite upper bounds become
  // s_j <= hi_j - lo_j rows.
  struct Row {
    std::vector<double> a;
    RowSense sense;
    double rhs;
  };
  std::vector<Row> rows;
  for (const LinRow& r : lp.rows) {
    Row row{std::vector<double>(static_cast<std::size_t>(n), 0.0), r.sense, r.rhs};
    for (const auto& [j, v] : r.coefs) {
      row.a[static_cast<std::size_t>(j)] = v;
      row.rhs -= v * lp.lo[static_cast<std::size_t>(j)];
    }
    rows.push_back(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    Row row{std::vector<double>(static_cast<std::size_t>(n), 0.0), RowSense::Le,
            lp.hi[static_cast<std::size_t>(j)] - lp.lo[static_cast<std::size_t>(j)]};
    row.a[static_cast<std::size_t>(j)] = 1.0;
    rows.push_back(std::move(row));
  }

  const int m = static_cast<int>(rows.size());
  // Columns: n structurals, m slack/surplus slots, m artificial slots.
  const int total = n + 2 * m;
  Tableau t(m, total);
  std::vector<double> phase1(static_cast<std::size_t>(total), 0.0);
  std::vector<bool> all(static_cast<std::size_t>(total), true);

  for (int i = 0; i < m; ++i) {
    Row& row = rows[static_cast<std::size_t>(i)];
    if (row.rhs < 0.0) {
      for (double& v : row.a) v = -v;
      row.rhs = -row.rhs;
      row.sense = row.sense == RowSense::Ge   ? RowSense::Le
                  : row.sense == RowSense::Le ? RowSense::Ge
                                              : RowSense::Eq;
    }
    for (int j = 0; j < n; ++j) t.a_[i][j] = row.a[static_cast<std::size_t>(j)];
    t.b_[i] = row.rhs;
    const int slack = n + i;
    const int artificial = n + m + i;
    if (row.sense == RowSense::Le) {
      t.a_[i][slack] = 1.0;
      t.basis_[i] = slack;
    } else {
      if (row.sense == RowSense::Ge) t.a_[i][slack] = -1.0;
      t.a_[i][artificial] = 1.0;
      t.basis_[i] = artificial;
      phase1[static_cast<std::size_t>(artificial)] = 1.0;
    }
  }

  if (!t.run(phase1, all)) return {LpOutcome::Infeasible, 0.0, {}};
  if (t.objective(phase1) > 1e-7) return {LpOutcome::Infeasible, 0.0, {}};

  // Kick residual artificials out of the basis where possible; rows that
  // offer no pivot are redundant and stay parked at zero.
  std::vector<bool> no_art(static_cast<std::size_t>(total), true);
  for (int j = n + m; j < total; ++j) no_art[static_cast<std::size_t>(j)] = false;
  for (int i = 0; i < m; ++i) {
    if (t.basis_[i] < n + m) continue;
    for (int j = 0; j < n + m; ++j) {
      if (std::fabs(t.a_[i][j]) > kTol) {
        t.pivot(i, j);
        break;
      }
    }
  }

  std::vector<double> phase2(static_cast<std::size_t>(total), 0.0);
  for (int j = 0; j < n; ++j) phase2[static_cast<std::size_t>(j)] = lp.cost[static_cast<std::size_t>(j)];
  if (!t.run(phase2, no_art)) return {LpOutcome::Unbounded, 0.0, {}};

  LpAnswer ans;
  ans.outcome = LpOutcome::Optimal;
  ans.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis_[i] < n) ans.x[static_cast<std::size_t>(t.basis_[i])] = t.b_[i];
  }
  ans.objective = 0.0;
  for (int j = 0; j < n; ++j) {
    ans.x[static_cast<std::size_t>(j)] += lp.lo[static_cast<std::size_t>(j)];
    ans.objective += lp.cost[static_cast<std::size_t>(j)] * ans.x[static_cast<std::size_t>(j)];
  }
  return ans;
}

std::vector<double> eigenvalues_bisection(const std::vector<double>& a, int n) {
  // Householder reduction to tridiagonal form (diag d, off-diagonal e).
  std::vector<std::vector<double>> m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(i * n + j)];

  for (int k = 0; k < n - 2; ++k) {
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    norm = std::sqrt(norm);
    if (norm < 1e-300) continue;
    if (m[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(k)] < 0.0) norm = -norm;

    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[static_cast<std::size_t>(k + 1)] = m[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(k)] + norm;
    for (int i = k + 2; i < n; ++i) v[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    double vtv = 0.0;
    for (int i = 0; i < n; ++i) vtv += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    if (vtv < 1e-300) continue;

    // m <- H m H with H = I - 2 v v'/v'v.
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] = s * 2.0 / vtv;
    }
    double vw = 0.0;
    for (int i = 0; i < n; ++i) vw += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            -v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] - w[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] +
            (vw * 2.0 / vtv) * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
      }
    }
  }

  std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) e[static_cast<std::size_t>(i + 1)] = m[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i)];

  // Sturm count: eigenvalues of the tridiagonal matrix strictly below t.
  const auto count_below = [&](double t) {
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
      const double e2 = e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
      q = d[static_cast<std::size_t>(i)] - t - (q == 0.0 ? e2 / 1e-300 : e2 / q);
      if (q < 0.0) ++count;
    }
    return count;
  };

  double radius = 0.0;
  for (int i = 0; i < n; ++i) {
    radius = std::max(radius, std::fabs(d[static_cast<std::size_t>(i)]) + std::fabs(e[static_cast<std::size_t>(i)]) +
                                  (i + 1 < n ? std::fabs(e[static_cast<std::size_t>(i + 1)]) : 0.0));
  }
  radius += 1.0;

  std::vector<double> values(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double lo = -radius, hi = radius;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) <= k)
        lo = mid;
      else
        hi = mid;
    }
    values[static_cast<std::size_t>(k)] = 0.5 * (lo + hi);
  }
  return values;
}

double best_modularity(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  assert(n <= 10);
  int edges2 = 0;
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    deg[static_cast<std::size_t>(i)] = static_cast<int>(adj[static_cast<std::size_t>(i)].size());
    edges2 += deg[static_cast<std::size_t>(i)];
  }
  if (edges2 == 0) return 0.0;
  const double m2 = static_cast<double>(edges2);

  std::vector<int> part(static_cast<std::size_t>(n), 0);
  double best = -1.0;
  // Restricted-growth enumeration of set partitions.
  const auto evaluate = [&]() {
    const int groups = *std::max_element(part.begin(), part.end()) + 1;
    std::vector<double> within(static_cast<std::size_t>(groups), 0.0);
    std::vector<double> total(static_cast<std::size_t>(groups), 0.0);
    for (int i = 0; i < n; ++i) {
      total[static_cast<std::size_t>(part[static_cast<std::size_t>(i)])] += deg[static_cast<std::size_t>(i)];
      for (int j : adj[static_cast<std::size_t>(i)]) {
        if (part[static_cast<std::size_t>(i)] == part[static_cast<std::size_t>(j)]) within[static_cast<std::size_t>(part[static_cast<std::size_t>(i)])] += 1.0;
      }
    }
    double q = 0.0;
    for (int g = 0; g < groups; ++g) {
      q += within[static_cast<std::size_t>(g)] / m2 - (total[static_cast<std::size_t>(g)] / m2) * (total[static_cast<std::size_t>(g)] / m2);
    }
    best = std::max(best, q);
  };

  const auto recurse = [&](auto&& self, int i, int max_used) -> void {
    if (i == n) {
      evaluate();
      return;
    }
    for (int g = 0; g <= max_used + 1 && g < n; ++g) {
      part[static_cast<std::size_t>(i)] = g;
      self(self, i + 1, std::max(max_used, g));
    }
  };
  recurse(recurse, 0, -1);
  return best;
}

double constraint_violation(const Problem& p, const std::vector<double>& x) {
  double v = 0.0;
  for (const Constraint& c : p.constraints) {
    const double body = c.body.evaluate(x);
    v += c.sense == Sense::Ge ? std::max(0.0, c.rhs - body) : std::fabs(body - c.rhs);
  }
  return v;
}

GlobalMin global_minimum(const Problem& p, int grid, double feas_tol) {
  const int n = p.num_vars;
  if (grid <= 0) grid = n <= 3 ? 41 : 21;

  // Full scan, keeping the best few dozen penalized values as starts.
  struct Start {
    double v;
    std::vector<double> x;
  };
  std::vector<Start> starts;
  const double start_rho = 1e4;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double t = grid == 1 ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(j)]) / (grid - 1);
      x[static_cast<std::size_t>(j)] = p.box.lo[static_cast<std::size_t>(j)] + t * p.box.width(j);
    }
    starts.push_back({penalized(p, x, start_rho), std::move(x)});
    if (starts.size() > 600) {
      std::nth_element(starts.begin(), starts.begin() + 60, starts.end(),
                       [](const Start& a, const Start& b) { return a.v < b.v; });
      starts.resize(60);
    }
    int j = 0;
    while (j < n && ++idx[static_cast<std::size_t>(j)] == grid) {
      idx[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == n) break;
  }
  std::sort(starts.begin(), starts.end(),
            [](const Start& a, const Start& b) { return a.v < b.v; });
  if (starts.size() > 40) starts.resize(40);

  double cell = 0.0;
  for (int j = 0; j < n; ++j) cell = std::max(cell, p.box.width(j));
  cell /= std::max(1, grid - 1);

  GlobalMin out;
  for (const Start& s : starts) {
    const std::vector<double> x = zoom_refine(p, s.x, cell);
    if (constraint_violation(p, x) > feas_tol) continue;
    const double v = p.objective.evaluate(x);
    if (!out.found || v < out.value) {
      out.found = true;
      out.value = v;
      out.x = x;
    }
  }
  return out;
}

std::vector<std::vector<double>> sample_feasible(const Problem& p, int count,
                                                 std::uint64_t seed, double tol,
                                                 int max_tries) {
  std::mt19937_64 g(seed);
  std::vector<std::vector<double>> points;
  for (int t = 0; t < max_tries && static_cast<int>(points.size()) < count; ++t) {
    std::vector<double> x(static_cast<std::size_t>(p.num_vars));
    for (int j = 0; j < p.num_vars; ++j) {
      const double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
      x[static_cast<std::size_t>(j)] = p.box.lo[static_cast<std::size_t>(j)] + u * p.box.width(j);
    }
    if (constraint_violation(p, x) <= tol) points.push_back(std::move(x));
  }
  return points;
}

}  // namespace polyopt::oracle
