#include "polyopt/conic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-6;
constexpr int kMaxIter = 20000;
constexpr int kCheckEvery = 25;
constexpr int kStallWindow = 500;
constexpr double kSqrt2 = 1.4142135623730951;

int svec_index(int i, int j) {  // i <= j
  return j * (j + 1) / 2 + i;
}

void svec_to_mat(const std::vector<double>& v, int n, std::vector<double>& m) {
  m.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      double x = v[static_cast<std::size_t>(svec_index(i, j))];
      if (i != j) x /= kSqrt2;
      m[static_cast<std::size_t>(i) * n + j] = x;
      m[static_cast<std::size_t>(j) * n + i] = x;
    }
}

void mat_to_svec(const std::vector<double>& m, int n, std::vector<double>& v) {
  v.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      double x = m[static_cast<std::size_t>(i) * n + j];
      v[static_cast<std::size_t>(svec_index(i, j))] = i == j ? x : kSqrt2 * x;
    }
}

// Dense Cholesky, lower triangular in place.
bool cholesky(std::vector<double>& a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[static_cast<std::size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      double l = a[static_cast<std::size_t>(j) * n + k];
      d -= l * l;
    }
    if (d <= 0.0) return false;
    d = std::sqrt(d);
    a[static_cast<std::size_t>(j) * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
      a[static_cast<std::size_t>(i) * n + j] = s / d;
    }
  }
  return true;
}

void chol_solve(const std::vector<double>& l, int n, std::vector<double>& b) {
  for (int i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) s -= l[static_cast<std::size_t>(i) * n + k] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) s -= l[static_cast<std::size_t>(k) * n + i] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i) * n + i];
  }
}

void project_cone_block(ConeType type, int side, std::vector<double>& v) {
  switch (type) {
    case ConeType::Zero:
      std::fill(v.begin(), v.end(), 0.0);
      break;
    case ConeType::NonNeg:
      for (double& x : v) x = std::max(x, 0.0);
      break;
    case ConeType::SecondOrder:
      v = project_soc(v);
      break;
    case ConeType::Psd:
      v = project_psd(v, side);
      break;
  }
}

// Projection onto the dual cone (self-dual everywhere except Zero, whose
// dual is the full space).
void project_dual_block(ConeType type, int side, std::vector<double>& v) {
  if (type == ConeType::Zero) return;
  project_cone_block(type, side, v);
}

struct ScaledData {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> h, c, d, e;  // d: column scale, e: row scale
};

ScaledData ruiz_scale(const ConicProblem& p) {
  int m = static_cast<int>(p.rows.size());
  ScaledData s;
  s.d.assign(static_cast<std::size_t>(p.num_cols), 1.0);
  s.e.assign(static_cast<std::size_t>(m), 1.0);
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> rnorm(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i)
      for (const auto& [j, v] : p.rows[static_cast<std::size_t>(i)])
        rnorm[static_cast<std::size_t>(i)] = std::max(
            rnorm[static_cast<std::size_t>(i)],
            std::abs(s.e[static_cast<std::size_t>(i)] * v * s.d[static_cast<std::size_t>(j)]));
    // Rows of a SecondOrder or Psd block must share one scalar to preserve
    // cone membership.
    int at = 0;
    for (const auto& blk : p.cones) {
      if (blk.type == ConeType::SecondOrder || blk.type == ConeType::Psd) {
        double mx = 0.0;
        for (int i = at; i < at + blk.dim; ++i) mx = std::max(mx, rnorm[static_cast<std::size_t>(i)]);
        for (int i = at; i < at + blk.dim; ++i) rnorm[static_cast<std::size_t>(i)] = mx;
      }
      at += blk.dim;
    }
    for (int i = 0; i < m; ++i)
      if (rnorm[static_cast<std::size_t>(i)] > 1e-12)
        s.e[static_cast<std::size_t>(i)] /= std::sqrt(rnorm[static_cast<std::size_t>(i)]);
    std::vector<double> cnorm(static_cast<std::size_t>(p.num_cols), 0.0);
    for (int i = 0; i < m; ++i)
      for (const auto& [j, v] : p.rows[static_cast<std::size_t>(i)])
        cnorm[static_cast<std::size_t>(j)] = std::max(
            cnorm[static_cast<std::size_t>(j)],
            std::abs(s.e[static_cast<std::size_t>(i)] * v * s.d[static_cast<std::size_t>(j)]));
    for (int j = 0; j < p.num_cols; ++j)
      if (cnorm[static_cast<std::size_t>(j)] > 1e-12)
        s.d[static_cast<std::size_t>(j)] /= std::sqrt(cnorm[static_cast<std::size_t>(j)]);
  }
  s.rows.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    s.rows[static_cast<std::size_t>(i)] = p.rows[static_cast<std::size_t>(i)];
    for (auto& [j, v] : s.rows[static_cast<std::size_t>(i)])
      v *= s.e[static_cast<std::size_t>(i)] * s.d[static_cast<std::size_t>(j)];
  }
  s.h.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) s.h[static_cast<std::size_t>(i)] = p.h[static_cast<std::size_t>(i)] * s.e[static_cast<std::size_t>(i)];
  s.c.resize(static_cast<std::size_t>(p.num_cols));
  for (int j = 0; j < p.num_cols; ++j) s.c[static_cast<std::size_t>(j)] = p.c[static_cast<std::size_t>(j)] * s.d[static_cast<std::size_t>(j)];
  return s;
}

}  // namespace

std::vector<double> project_soc(const std::vector<double>& v) {
  double t = v[0];
  double nx = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) nx += v[i] * v[i];
  nx = std::sqrt(nx);
  if (nx <= t) return v;
  std::vector<double> r(v.size(), 0.0);
  if (nx <= -t) return r;
  double a = 0.5 * (t + nx);
  r[0] = a;
  double scale = nx > 0.0 ? a / nx : 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) r[i] = scale * v[i];
  return r;
}

void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& values,
                  std::vector<double>& vectors) {
  vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vectors[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto V = [&](int i, int j) -> double& { return vectors[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 30; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(A(i, j)));
    if (off <= 1e-11) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::abs(apq) <= 1e-11) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = A(i, i);
}

std::vector<double> project_psd(const std::vector<double>& v, int side) {
  std::vector<double> m;
  svec_to_mat(v, side, m);
  std::vector<double> vals, vecs;
  jacobi_eigen(m, side, vals, vecs);
  std::vector<double> out(static_cast<std::size_t>(side) * side, 0.0);
  for (int k = 0; k < side; ++k) {
    double lam = vals[static_cast<std::size_t>(k)];
    if (lam <= 0.0) continue;
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j)
        out[static_cast<std::size_t>(i) * side + j] +=
            lam * vecs[static_cast<std::size_t>(i) * side + k] * vecs[static_cast<std::size_t>(j) * side + k];
  }
  std::vector<double> r;
  mat_to_svec(out, side, r);
  return r;
}

ConicResult solve_conic(const ConicProblem& p) {
  int m = static_cast<int>(p.rows.size());
  int n = p.num_cols;
  if (m == 0 || n == 0) throw std::invalid_argument("empty conic problem");
  int cone_dim = 0;
  for (const auto& blk : p.cones) cone_dim += blk.dim;
  if (cone_dim != m) throw std::invalid_argument("cone dims do not match row count");

  ScaledData sd = ruiz_scale(p);

  // Normal matrix G = A'A of the scaled system.
  std::vector<double> G(static_cast<std::size_t>(n) * n, 0.0);
  double max_diag = 0.0;
  for (int i = 0; i < m; ++i)
    for (const auto& [j1, v1] : sd.rows[static_cast<std::size_t>(i)])
      for (const auto& [j2, v2] : sd.rows[static_cast<std::size_t>(i)])
        G[static_cast<std::size_t>(j1) * n + j2] += v1 * v2;
  for (int j = 0; j < n; ++j) max_diag = std::max(max_diag, G[static_cast<std::size_t>(j) * n + j]);
  double sigma = 1e-10 * (1.0 + max_diag);

  double rho = 1.0;
  std::vector<double> M;
  auto factor = [&]() {
    M.resize(G.size());
    for (std::size_t k = 0; k < G.size(); ++k) M[k] = rho * G[k];
    for (int j = 0; j < n; ++j) M[static_cast<std::size_t>(j) * n + j] += sigma;
    int tries = 0;
    while (!cholesky(M, n)) {
      sigma = std::max(sigma * 100.0, 1e-8);
      for (std::size_t k = 0; k < G.size(); ++k) M[k] = rho * G[k];
      for (int j = 0; j < n; ++j) M[static_cast<std::size_t>(j) * n + j] += sigma;
      if (++tries > 20) throw std::runtime_error("conic normal matrix not positive definite");
    }
  };
  factor();

  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  std::vector<double> w(sd.h);  // start at h (Az = 0 guess projected later)
  std::vector<double> y(static_cast<std::size_t>(m), 0.0);
  std::vector<double> az(static_cast<std::size_t>(m), 0.0);

  auto apply_rows = [&](const std::vector<std::vector<std::pair<int, double>>>& rows,
                        const std::vector<double>& x, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      double s = 0.0;
      for (const auto& [j, v] : rows[static_cast<std::size_t>(i)]) s += v * x[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = s;
    }
  };

  ConicResult res;
  double best_rp = kInf, window_best_rp = kInf;
  double hnorm = 1.0, cnorm = 1.0;
  for (double v : p.h) hnorm = std::max(hnorm, std::abs(v));
  for (double v : p.c) cnorm = std::max(cnorm, std::abs(v));

  std::vector<double> zu(static_cast<std::size_t>(n)), yu(static_cast<std::size_t>(m));
  std::vector<double> slack(static_cast<std::size_t>(m)), proj(static_cast<std::size_t>(m));

  int it = 0;
  for (it = 1; it <= kMaxIter; ++it) {
    // z-update: (sigma I + rho A'A) z = A'(rho w - y) - c
    std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) {
      double coef = rho * w[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
      if (coef == 0.0) continue;
      for (const auto& [j, v] : sd.rows[static_cast<std::size_t>(i)]) rhs[static_cast<std::size_t>(j)] += v * coef;
    }
    for (int j = 0; j < n; ++j) rhs[static_cast<std::size_t>(j)] -= sd.c[static_cast<std::size_t>(j)];
    chol_solve(M, n, rhs);
    z = std::move(rhs);

    apply_rows(sd.rows, z, az);

    // w-update: project v = Az + y/rho onto C = {h - s : s in K}.
    int at = 0;
    for (const auto& blk : p.cones) {
      std::vector<double> u(static_cast<std::size_t>(blk.dim));
      for (int i = 0; i < blk.dim; ++i) {
        auto r = static_cast<std::size_t>(at + i);
        u[static_cast<std::size_t>(i)] = sd.h[r] - (az[r] + y[r] / rho);
      }
      project_cone_block(blk.type, blk.side, u);
      for (int i = 0; i < blk.dim; ++i) {
        auto r = static_cast<std::size_t>(at + i);
        w[r] = sd.h[r] - u[static_cast<std::size_t>(i)];
      }
      at += blk.dim;
    }

    // y-update; lands in the dual cone by construction.
    for (int i = 0; i < m; ++i) {
      auto r = static_cast<std::size_t>(i);
      y[r] += rho * (az[r] - w[r]);
    }

    if (it % kCheckEvery != 0 && it != kMaxIter) continue;

    // Unscaled residuals.
    for (int j = 0; j < n; ++j) zu[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] * sd.d[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) yu[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] * sd.e[static_cast<std::size_t>(i)];
    apply_rows(p.rows, zu, slack);
    for (int i = 0; i < m; ++i) slack[static_cast<std::size_t>(i)] = p.h[static_cast<std::size_t>(i)] - slack[static_cast<std::size_t>(i)];
    proj = slack;
    int bat = 0;
    for (const auto& blk : p.cones) {
      std::vector<double> u(proj.begin() + bat, proj.begin() + bat + blk.dim);
      project_cone_block(blk.type, blk.side, u);
      std::copy(u.begin(), u.end(), proj.begin() + bat);
      bat += blk.dim;
    }
    double rp = 0.0;
    for (int i = 0; i < m; ++i) rp = std::max(rp, std::abs(slack[static_cast<std::size_t>(i)] - proj[static_cast<std::size_t>(i)]));
    rp /= hnorm;
    double rd = 0.0;
    {
      std::vector<double> g(p.c);
      for (int i = 0; i < m; ++i) {
        double yi = yu[static_cast<std::size_t>(i)];
        if (yi == 0.0) continue;
        for (const auto& [j, v] : p.rows[static_cast<std::size_t>(i)]) g[static_cast<std::size_t>(j)] += v * yi;
      }
      for (int j = 0; j < n; ++j) rd = std::max(rd, std::abs(g[static_cast<std::size_t>(j)]));
      rd /= cnorm;
    }
    double pobj = 0.0, dobj = 0.0;
    for (int j = 0; j < n; ++j) pobj += p.c[static_cast<std::size_t>(j)] * zu[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) dobj -= p.h[static_cast<std::size_t>(i)] * yu[static_cast<std::size_t>(i)];
    double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    res.primal_residual = rp;
    res.dual_residual = rd;
    res.gap_residual = gap;
    best_rp = std::min(best_rp, rp);

    if (std::max({rp, rd, gap}) <= kTol) {
      res.status = ConicStatus::Optimal;
      break;
    }
    if (it % kStallWindow == 0) {
      if (rp > 1e-3 && rp >= 0.99 * window_best_rp) {
        res.status = ConicStatus::Infeasible;
        break;
      }
      window_best_rp = rp;
    }
    if (it % 50 == 0) {
      if (rp > 10.0 * rd && rho < 1e4) {
        rho *= 2.0;
        factor();
      } else if (rd > 10.0 * rp && rho > 1e-4) {
        rho /= 2.0;
        factor();
      }
    }
  }
  res.iterations = std::min(it, kMaxIter);
  if (res.status != ConicStatus::Optimal && res.status != ConicStatus::Infeasible)
    res.status = ConicStatus::MaxIter;

  for (int j = 0; j < n; ++j) zu[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] * sd.d[static_cast<std::size_t>(j)];
  for (int i = 0; i < m; ++i) yu[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] * sd.e[static_cast<std::size_t>(i)];
  res.z = zu;
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) res.objective += p.c[static_cast<std::size_t>(j)] * zu[static_cast<std::size_t>(j)];

  // Certified bound: project the dual onto K*, then
  //   c'z >= -h'y + sum_j min over [lo_j, hi_j] of (c + A'y)_j z_j
  // for every feasible z, valid for arbitrary y in K*.
  if (!p.col_lo.empty()) {
    int at = 0;
    for (const auto& blk : p.cones) {
      std::vector<double> u(yu.begin() + at, yu.begin() + at + blk.dim);
      project_dual_block(blk.type, blk.side, u);
      std::copy(u.begin(), u.end(), yu.begin() + at);
      at += blk.dim;
    }
    std::vector<double> g(p.c);
    for (int i = 0; i < m; ++i) {
      double yi = yu[static_cast<std::size_t>(i)];
      if (yi == 0.0) continue;
      for (const auto& [j, v] : p.rows[static_cast<std::size_t>(i)]) g[static_cast<std::size_t>(j)] += v * yi;
    }
    double bound = 0.0;
    for (int i = 0; i < m; ++i) bound -= p.h[static_cast<std::size_t>(i)] * yu[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      auto uj = static_cast<std::size_t>(j);
      bound += std::min(g[uj] * p.col_lo[uj], g[uj] * p.col_hi[uj]);
    }
    if (res.status == ConicStatus::MaxIter)
      bound -= 10.0 * res.gap_residual * (1.0 + std::abs(res.objective));
    res.certified_bound = bound;
  }
  return res;
}

}  // namespace polyopt
