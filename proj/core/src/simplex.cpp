#include "polyopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-7;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-8;
constexpr double kZeroTol = 1e-11;
constexpr int kRefactorEvery = 100;

struct Eta {
  int row;
  std::vector<double> d;  // B^{-1} * entering column at pivot time
};

// Dense LU with partial pivoting, plus a product-form eta list for pivots
// performed since the last refactorization.
class Basis {
 public:
  void factorize(const std::vector<std::vector<double>>& cols) {
    m_ = static_cast<int>(cols.size());
    lu_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    perm_.resize(static_cast<std::size_t>(m_));
    etas_.clear();
    for (int j = 0; j < m_; ++j)
      for (int i = 0; i < m_; ++i) at(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    for (int i = 0; i < m_; ++i) perm_[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < m_; ++k) {
      int p = k;
      double best = std::abs(at(k, k));
      for (int i = k + 1; i < m_; ++i) {
        double v = std::abs(at(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best < 1e-13) throw std::runtime_error("singular basis");
      if (p != k) {
        for (int j = 0; j < m_; ++j) std::swap(at(k, j), at(p, j));
        std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(p)]);
      }
      for (int i = k + 1; i < m_; ++i) {
        double f = at(i, k) / at(k, k);
        at(i, k) = f;
        if (f == 0.0) continue;
        for (int j = k + 1; j < m_; ++j) at(i, j) -= f * at(k, j);
      }
    }
  }

  int num_etas() const { return static_cast<int>(etas_.size()); }

  void push_eta(int row, std::vector<double> d) { etas_.push_back({row, std::move(d)}); }

  // Solves B z = v.
  void ftran(std::vector<double>& v) const {
    lu_solve(v);
    for (const auto& e : etas_) {
      auto r = static_cast<std::size_t>(e.row);
      double zr = v[r] / e.d[r];
      v[r] = zr;
      if (zr != 0.0)
        for (int i = 0; i < m_; ++i)
          if (i != e.row) v[static_cast<std::size_t>(i)] -= e.d[static_cast<std::size_t>(i)] * zr;
    }
  }

  // Solves B' y = v.
  void btran(std::vector<double>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      auto r = static_cast<std::size_t>(it->row);
      double acc = v[r];
      for (int i = 0; i < m_; ++i)
        if (i != it->row) acc -= it->d[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
      v[r] = acc / it->d[r];
    }
    lu_solve_transposed(v);
  }

 private:
  double& at(int i, int j) { return lu_[static_cast<std::size_t>(i) * m_ + j]; }
  double at(int i, int j) const { return lu_[static_cast<std::size_t>(i) * m_ + j]; }

  // Solves (LU) z = P v in place.
  void lu_solve(std::vector<double>& v) const {
    std::vector<double> w(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) w[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < i; ++j) w[static_cast<std::size_t>(i)] -= at(i, j) * w[static_cast<std::size_t>(j)];
    for (int i = m_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < m_; ++j) w[static_cast<std::size_t>(i)] -= at(i, j) * w[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] /= at(i, i);
    }
    v = std::move(w);
  }

  // Solves B' y = v where PB = LU, so U' L' P y = v.
  void lu_solve_transposed(std::vector<double>& v) const {
    std::vector<double> s(v);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < i; ++j) s[static_cast<std::size_t>(i)] -= at(j, i) * s[static_cast<std::size_t>(j)];
      s[static_cast<std::size_t>(i)] /= at(i, i);
    }
    for (int i = m_ - 1; i >= 0; --i)
      for (int j = i + 1; j < m_; ++j) s[static_cast<std::size_t>(i)] -= at(j, i) * s[static_cast<std::size_t>(j)];
    for (int i = 0; i < m_; ++i) v[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = s[static_cast<std::size_t>(i)];
  }

  int m_ = 0;
  std::vector<double> lu_;
  std::vector<int> perm_;
  std::vector<Eta> etas_;
};

class Simplex {
 public:
  explicit Simplex(const LpProblem& lp) : lp_(lp) {
    n_ = lp.num_cols;
    m_ = static_cast<int>(lp.rows.size());
    total_ = n_ + m_;
    build_columns();
    lo_ = lp.lo;
    hi_ = lp.hi;
    lo_.resize(static_cast<std::size_t>(total_));
    hi_.resize(static_cast<std::size_t>(total_));
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp_.rows[static_cast<std::size_t>(i)];
      auto s = static_cast<std::size_t>(n_ + i);
      switch (row.sense) {
        case RowSense::Ge:
          lo_[s] = row.rhs;
          hi_[s] = kInf;
          break;
        case RowSense::Le:
          lo_[s] = -kInf;
          hi_[s] = row.rhs;
          break;
        case RowSense::Eq:
          lo_[s] = row.rhs;
          hi_[s] = row.rhs;
          break;
      }
    }
    iter_limit_ = 50 * (m_ + n_) + 10000;
  }

  LpResult run() {
    init_basis();
    LpResult res;
    bool feasible = solve_phase(true, res);
    if (res.status == LpStatus::IterLimit && iters_ >= iter_limit_) return finish(res);
    if (!feasible) {
      res.status = LpStatus::Infeasible;
      return finish(res);
    }
    solve_phase(false, res);
    return finish(res);
  }

 private:
  void build_columns() {
    col_entries_.assign(static_cast<std::size_t>(n_ + m_), {});
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, v] : lp_.rows[static_cast<std::size_t>(i)].coefs)
        col_entries_[static_cast<std::size_t>(j)].emplace_back(i, v);
      col_entries_[static_cast<std::size_t>(n_ + i)].emplace_back(i, -1.0);
    }
  }

  void init_basis() {
    state_.assign(static_cast<std::size_t>(total_), ColStatus::AtLo);
    x_.assign(static_cast<std::size_t>(total_), 0.0);
    basis_.resize(static_cast<std::size_t>(m_));
    pos_.assign(static_cast<std::size_t>(total_), -1);
    for (int j = 0; j < n_; ++j) {
      auto uj = static_cast<std::size_t>(j);
      if (std::isfinite(lo_[uj])) {
        state_[uj] = ColStatus::AtLo;
        x_[uj] = lo_[uj];
      } else if (std::isfinite(hi_[uj])) {
        state_[uj] = ColStatus::AtHi;
        x_[uj] = hi_[uj];
      } else {
        state_[uj] = ColStatus::AtLo;  // free column parked at zero
        x_[uj] = 0.0;
      }
    }
    for (int i = 0; i < m_; ++i) {
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      state_[static_cast<std::size_t>(n_ + i)] = ColStatus::Basic;
      pos_[static_cast<std::size_t>(n_ + i)] = i;
    }
    refactorize();
    recompute_basics();
  }

  void refactorize() {
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) {
      auto& col = cols[static_cast<std::size_t>(k)];
      col.assign(static_cast<std::size_t>(m_), 0.0);
      for (const auto& [i, v] : col_entries_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])])
        col[static_cast<std::size_t>(i)] = v;
    }
    basis_factor_.factorize(cols);
  }

  void recompute_basics() {
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < total_; ++j) {
      auto uj = static_cast<std::size_t>(j);
      if (state_[uj] == ColStatus::Basic || x_[uj] == 0.0) continue;
      for (const auto& [i, v] : col_entries_[uj]) rhs[static_cast<std::size_t>(i)] -= v * x_[uj];
    }
    basis_factor_.ftran(rhs);
    for (int k = 0; k < m_; ++k) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])] = rhs[static_cast<std::size_t>(k)];
  }

  double phase1_cost(int col) const {
    auto uc = static_cast<std::size_t>(col);
    if (x_[uc] < lo_[uc] - kFeasTol) return -1.0;
    if (x_[uc] > hi_[uc] + kFeasTol) return 1.0;
    return 0.0;
  }

  double infeasibility() const {
    double s = 0.0;
    for (int k = 0; k < m_; ++k) {
      auto uc = static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)]);
      if (x_[uc] < lo_[uc]) s += lo_[uc] - x_[uc];
      if (x_[uc] > hi_[uc]) s += x_[uc] - hi_[uc];
    }
    return s;
  }

  // Runs one simplex phase. Returns true when phase 1 reached feasibility or
  // phase 2 reached optimality; res.status is set for terminal states.
  bool solve_phase(bool phase1, LpResult& res) {
    int degenerate_run = 0;
    bool bland = false;
    const int bland_after = 3 * (m_ + n_);

    while (true) {
      if (iters_ >= iter_limit_) {
        res.status = LpStatus::IterLimit;
        return false;
      }
      if (phase1 && infeasibility() <= kFeasTol) return true;

      // Dual prices for the phase objective.
      std::vector<double> y(static_cast<std::size_t>(m_), 0.0);
      for (int k = 0; k < m_; ++k) {
        int col = basis_[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(k)] = phase1 ? phase1_cost(col)
                                                : (col < n_ ? lp_.cost[static_cast<std::size_t>(col)] : 0.0);
      }
      basis_factor_.btran(y);

      // Pricing.
      int entering = -1;
      double best_score = bland ? 0.0 : kDualTol;
      int direction = 0;
      for (int j = 0; j < total_; ++j) {
        auto uj = static_cast<std::size_t>(j);
        if (state_[uj] == ColStatus::Basic) continue;
        if (lo_[uj] == hi_[uj]) continue;
        double obj_c = phase1 ? 0.0 : (j < n_ ? lp_.cost[uj] : 0.0);
        double rc = obj_c;
        for (const auto& [i, v] : col_entries_[uj]) rc -= y[static_cast<std::size_t>(i)] * v;
        bool fromlo = state_[uj] == ColStatus::AtLo;
        bool free_col = !std::isfinite(lo_[uj]) && !std::isfinite(hi_[uj]);
        double score = 0.0;
        int dir = 0;
        if (free_col) {
          if (rc < -kDualTol) {
            score = -rc;
            dir = 1;
          } else if (rc > kDualTol) {
            score = rc;
            dir = -1;
          }
        } else if (fromlo && rc < -kDualTol) {
          score = -rc;
          dir = 1;
        } else if (!fromlo && rc > kDualTol) {
          score = rc;
          dir = -1;
        }
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (score > best_score) {
          best_score = score;
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) {
        if (phase1) {
          res.status = LpStatus::Infeasible;
          return false;
        }
        res.status = LpStatus::Optimal;
        return true;
      }

      // Direction through the basis.
      std::vector<double> dcol(static_cast<std::size_t>(m_), 0.0);
      for (const auto& [i, v] : col_entries_[static_cast<std::size_t>(entering)])
        dcol[static_cast<std::size_t>(i)] = v;
      basis_factor_.ftran(dcol);

      // Ratio test. Basic k moves at rate delta_k = -direction * dcol[k].
      double best_t = kInf;
      int leave_pos = -1;
      bool leave_at_hi = false;
      double leave_pivot = 0.0;
      auto ue = static_cast<std::size_t>(entering);
      double own_range = hi_[ue] - lo_[ue];
      if (std::isfinite(own_range)) best_t = own_range;

      struct Event {
        double t;
        int pos;
        bool at_hi;
        double pivot;
      };
      std::vector<Event> events;
      for (int k = 0; k < m_; ++k) {
        double delta = -direction * dcol[static_cast<std::size_t>(k)];
        if (std::abs(delta) <= kZeroTol) continue;
        auto uc = static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)]);
        double xv = x_[uc];
        double t = kInf;
        bool at_hi = false;
        if (phase1 && xv < lo_[uc] - kFeasTol) {
          if (delta > 0) {
            t = (lo_[uc] - xv) / delta;
            at_hi = false;
          }
        } else if (phase1 && xv > hi_[uc] + kFeasTol) {
          if (delta < 0) {
            t = (hi_[uc] - xv) / delta;
            at_hi = true;
          }
        } else if (delta > 0 && std::isfinite(hi_[uc])) {
          t = (hi_[uc] - xv) / delta;
          at_hi = true;
        } else if (delta < 0 && std::isfinite(lo_[uc])) {
          t = (lo_[uc] - xv) / delta;
          at_hi = false;
        }
        if (t == kInf) continue;
        events.push_back({std::max(t, 0.0), k, at_hi, std::abs(delta)});
      }
      for (const auto& e : events) best_t = std::min(best_t, e.t);
      if (best_t == kInf) {
        // No blocking event. Phase 1 infeasibility is bounded below, so this
        // only happens in phase 2.
        res.status = phase1 ? LpStatus::IterLimit : LpStatus::Unbounded;
        return false;
      }
      // Among events within a small window of the minimum ratio, prefer a
      // pivot of decent magnitude; fall back to the best available.
      for (int pass = 0; pass < 2 && leave_pos < 0; ++pass) {
        for (const auto& e : events) {
          if (e.t > best_t + 1e-9) continue;
          if (pass == 0 && e.pivot < kPivotTol) continue;
          if (leave_pos < 0 || e.pivot > leave_pivot ||
              (e.pivot == leave_pivot && e.pos < leave_pos)) {
            leave_pos = e.pos;
            leave_at_hi = e.at_hi;
            leave_pivot = e.pivot;
          }
        }
      }
      double step = best_t;
      if (leave_pos >= 0) {
        // Recompute the exact step to the chosen blocker.
        double delta = -direction * dcol[static_cast<std::size_t>(leave_pos)];
        auto uc = static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave_pos)]);
        double target = leave_at_hi ? hi_[uc] : lo_[uc];
        step = std::max((target - x_[uc]) / delta, 0.0);
        if (std::isfinite(own_range) && own_range <= step) {
          leave_pos = -1;  // bound flip wins
          step = own_range;
        }
      }

      ++iters_;
      if (step <= 1e-10) {
        if (++degenerate_run >= bland_after) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      // Apply the step.
      if (step > 0.0) {
        for (int k = 0; k < m_; ++k) {
          double delta = -direction * dcol[static_cast<std::size_t>(k)];
          if (delta != 0.0) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])] += step * delta;
        }
        x_[ue] += direction * step;
      }

      if (leave_pos < 0) {
        // Bound flip.
        state_[ue] = state_[ue] == ColStatus::AtLo ? ColStatus::AtHi : ColStatus::AtLo;
        x_[ue] = state_[ue] == ColStatus::AtLo ? lo_[ue] : hi_[ue];
        continue;
      }

      int leaving = basis_[static_cast<std::size_t>(leave_pos)];
      auto ul = static_cast<std::size_t>(leaving);
      state_[ul] = leave_at_hi ? ColStatus::AtHi : ColStatus::AtLo;
      x_[ul] = leave_at_hi ? hi_[ul] : lo_[ul];
      pos_[ul] = -1;
      basis_[static_cast<std::size_t>(leave_pos)] = entering;
      state_[ue] = ColStatus::Basic;
      pos_[ue] = leave_pos;

      if (basis_factor_.num_etas() + 1 >= kRefactorEvery) {
        refactorize();
        recompute_basics();
      } else {
        basis_factor_.push_eta(leave_pos, std::move(dcol));
      }
    }
  }

  LpResult finish(LpResult& res) {
    res.iterations = iters_;
    res.x.assign(lp_.lo.size(), 0.0);
    for (int j = 0; j < n_; ++j) res.x[static_cast<std::size_t>(j)] = x_[static_cast<std::size_t>(j)];
    res.col_status.assign(static_cast<std::size_t>(n_), ColStatus::AtLo);
    for (int j = 0; j < n_; ++j) res.col_status[static_cast<std::size_t>(j)] = state_[static_cast<std::size_t>(j)];
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j) res.objective += lp_.cost[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];

    // Duals for the phase-2 objective, sign-clamped per row sense so the
    // certificate below is valid for any y.
    std::vector<double> y(static_cast<std::size_t>(m_), 0.0);
    for (int k = 0; k < m_; ++k) {
      int col = basis_[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(k)] = col < n_ ? lp_.cost[static_cast<std::size_t>(col)] : 0.0;
    }
    basis_factor_.btran(y);
    for (int i = 0; i < m_; ++i) {
      auto ui = static_cast<std::size_t>(i);
      if (lp_.rows[ui].sense == RowSense::Ge && y[ui] < 0.0) y[ui] = 0.0;
      if (lp_.rows[ui].sense == RowSense::Le && y[ui] > 0.0) y[ui] = 0.0;
    }
    res.y = y;

    res.reduced_cost.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      auto uj = static_cast<std::size_t>(j);
      double rc = lp_.cost[uj];
      for (const auto& [i, v] : col_entries_[uj]) rc -= y[static_cast<std::size_t>(i)] * v;
      res.reduced_cost[uj] = rc;
    }

    double dual_obj = 0.0;
    for (int i = 0; i < m_; ++i) dual_obj += y[static_cast<std::size_t>(i)] * lp_.rows[static_cast<std::size_t>(i)].rhs;
    for (int j = 0; j < n_; ++j) {
      auto uj = static_cast<std::size_t>(j);
      double rc = res.reduced_cost[uj];
      double contrib;
      if (rc >= 0.0)
        contrib = std::isfinite(lo_[uj]) ? rc * lo_[uj] : (rc == 0.0 ? 0.0 : -kInf);
      else
        contrib = std::isfinite(hi_[uj]) ? rc * hi_[uj] : -kInf;
      dual_obj += contrib;
    }
    res.dual_objective = dual_obj;
    return res;
  }

  const LpProblem& lp_;
  int n_ = 0, m_ = 0, total_ = 0;
  int iters_ = 0;
  int iter_limit_ = 0;
  std::vector<std::vector<std::pair<int, double>>> col_entries_;
  std::vector<double> lo_, hi_, x_;
  std::vector<ColStatus> state_;
  std::vector<int> basis_, pos_;
  Basis basis_factor_;
};

}  // namespace

LpResult solve_lp(const LpProblem& lp) {
  if (lp.num_cols != static_cast<int>(lp.cost.size()) ||
      lp.num_cols != static_cast<int>(lp.lo.size()) ||
      lp.num_cols != static_cast<int>(lp.hi.size()))
    throw std::invalid_argument("inconsistent LP dimensions");
  Simplex s(lp);
  return s.run();
}

LpProblem make_lp(const LinearRelaxation& r) { return make_lp(r, r.obj); }

LpProblem make_lp(const LinearRelaxation& r, const std::vector<double>& cost) {
  LpProblem lp;
  lp.num_cols = r.num_cols();
  lp.cost = cost;
  lp.lo = r.col_lo;
  lp.hi = r.col_hi;
  lp.rows = r.rows;
  return lp;
}

}  // namespace polyopt
