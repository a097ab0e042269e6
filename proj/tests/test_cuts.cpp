#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "polyopt/cuts.hpp"
#include "polyopt/instance_gen.hpp"
#include "polyopt/obbt.hpp"
#include "polyopt/rlt.hpp"
#include "polyopt/simplex.hpp"
#include "polyopt/work_clock.hpp"
#include "support/oracles.hpp"

using namespace polyopt;

namespace {

Problem bilinear_cap() {
  Problem p;
  p.num_vars = 2;
  p.box.lo = {0.0, 0.0};
  p.box.hi = {1.0, 1.0};
  p.objective.add_term(Monomial::from_vars({0, 1}), -1.0);
  Constraint cap;
  cap.body.add_term(Monomial::var(0), -1.0);
  cap.body.add_term(Monomial::var(1), -1.0);
  cap.sense = Sense::Ge;
  cap.rhs = -1.0;
  p.constraints.push_back(cap);
  return p;
}

}  // namespace

TEST_CASE("nb_cut_bound applies the scaled duality gap") {
  NbCut up{0, true, 2.0, 1.0, 5.0};
  CHECK(nb_cut_bound(up, 5.2) == doctest::Approx(0.9));
  CHECK(nb_cut_bound(up, 5.0) == doctest::Approx(1.0));

  NbCut down{1, false, 2.0, 0.0, 5.0};
  CHECK(nb_cut_bound(down, 5.2) == doctest::Approx(0.1));
  CHECK(nb_cut_bound(down, 5.4) == doctest::Approx(0.2));
}

TEST_CASE("derive_nb_cuts reads nonbasic multipliers") {
  LpProblem lp;
  lp.num_cols = 3;
  lp.cost = {-1.0, 2.0, -5.0};
  lp.lo = {0.0, 0.0, 0.5};
  lp.hi = {1.0, 1.0, 0.5};
  lp.rows.push_back(LinRow{{1.0, 1.0, 0.0}, RowSense::Le, 3.0});

  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-3.5));

  const double lp_bound = res.dual_objective;
  const std::vector<NbCut> cuts = derive_nb_cuts(lp, res, 3, lp_bound);
  REQUIRE(cuts.size() == 2);

  const NbCut& at_hi = cuts[0];
  CHECK(at_hi.var == 0);
  CHECK(at_hi.from_upper);
  CHECK(at_hi.mu == doctest::Approx(1.0));
  CHECK(at_hi.bound_value == doctest::Approx(1.0));

  const NbCut& at_lo = cuts[1];
  CHECK(at_lo.var == 1);
  CHECK_FALSE(at_lo.from_upper);
  CHECK(at_lo.mu == doctest::Approx(2.0));
  CHECK(at_lo.bound_value == doctest::Approx(0.0));

  // The fixed column has the largest multiplier but never yields a cut.
  for (const NbCut& c : cuts) CHECK(c.var != 2);

  // Sampled validity: any LP-feasible point with cost below the cutoff
  // respects both implied bounds.
  const double cutoff = lp_bound + 0.2;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double x0 = i / 40.0;
      const double x1 = j / 40.0;
      const double c = lp.cost[0] * x0 + lp.cost[1] * x1 + lp.cost[2] * 0.5;
      if (x0 + x1 > 3.0 || c > cutoff) continue;
      CHECK(x0 >= nb_cut_bound(at_hi, cutoff) - 1e-9);
      CHECK(x1 <= nb_cut_bound(at_lo, cutoff) + 1e-9);
    }
  }
}

TEST_CASE("derive_ob_cut recovers a binding row from reduced costs") {
  LpProblem lp;
  lp.num_cols = 2;
  lp.cost = {1.0, 0.0};
  lp.lo = {0.0, 0.3};
  lp.hi = {1.0, 1.0};
  lp.rows.push_back(LinRow{{1.0, -1.0}, RowSense::Ge, 0.0});

  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(0.3));

  const std::vector<Monomial> columns = {Monomial::var(0), Monomial::var(1)};
  const auto cut = derive_ob_cut(lp, res, columns, 0, true, false, 0.0);
  REQUIRE(cut.has_value());
  CHECK(cut->mu == doctest::Approx(0.0));
  CHECK(cut->dual_base == doctest::Approx(0.0));
  REQUIRE(cut->coefs.size() == 1);
  CHECK(cut->coefs[0].first == Monomial::var(1));
  CHECK(cut->coefs[0].second == doctest::Approx(1.0));

  // mu = 0 cuts materialize without an incumbent and read x0 >= x1 here.
  const Constraint c = materialize_ob_cut(*cut, 0.0);
  CHECK(c.sense == Sense::Ge);
  CHECK(c.rhs == doctest::Approx(0.0));
  CHECK(c.body.evaluate({0.7, 0.4}) == doctest::Approx(0.3));
  CHECK(c.body.evaluate({0.4, 0.4}) == doctest::Approx(0.0));
}

TEST_CASE("derive_ob_cut mirrors signs on the upper side") {
  LpProblem lp;
  lp.num_cols = 2;
  lp.cost = {-1.0, 0.0};
  lp.lo = {0.0, 0.3};
  lp.hi = {1.0, 0.7};
  lp.rows.push_back(LinRow{{1.0, -1.0}, RowSense::Le, 0.0});

  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-0.7));

  const std::vector<Monomial> columns = {Monomial::var(0), Monomial::var(1)};
  const auto cut = derive_ob_cut(lp, res, columns, 0, false, false, 1.0);
  REQUIRE(cut.has_value());
  REQUIRE(cut->coefs.size() == 1);
  CHECK(cut->coefs[0].first == Monomial::var(1));
  CHECK(cut->coefs[0].second == doctest::Approx(1.0));

  // Materializes as -x0 + x1 >= 0, i.e. the binding row x0 <= x1.
  const Constraint c = materialize_ob_cut(*cut, 0.0);
  CHECK(c.body.evaluate({0.2, 0.5}) == doctest::Approx(0.3));
  CHECK(c.rhs == doctest::Approx(0.0));
}

TEST_CASE("derive_ob_cut folds a binding cutoff row into mu") {
  LpProblem lp;
  lp.num_cols = 2;
  lp.cost = {1.0, 0.0};
  lp.lo = {0.0, 0.0};
  lp.hi = {2.0, 1.0};
  lp.rows.push_back(LinRow{{-1.0, 0.0}, RowSense::Le, -0.6});

  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(0.6));

  const std::vector<Monomial> columns = {Monomial::var(0), Monomial::var(1)};
  const auto cut = derive_ob_cut(lp, res, columns, 0, true, true, 0.0);
  REQUIRE(cut.has_value());
  CHECK(cut->mu == doctest::Approx(1.0));
  CHECK(cut->coefs.empty());
  CHECK(cut->dual_base == doctest::Approx(0.0));

  // rhs moves one-for-one with the incumbent: x0 >= -U for cutoff -x0 <= U.
  const Constraint at6 = materialize_ob_cut(*cut, -0.6);
  const Constraint at5 = materialize_ob_cut(*cut, -0.5);
  CHECK(at6.rhs == doctest::Approx(0.6));
  CHECK(at5.rhs - at6.rhs == doctest::Approx(-cut->mu * 0.1));
}

TEST_CASE("constant cuts survive only as strict improvements") {
  LpProblem lp;
  lp.num_cols = 1;
  lp.cost = {1.0};
  lp.lo = {0.4};
  lp.hi = {1.0};

  const LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  const std::vector<Monomial> columns = {Monomial::var(0)};
  // Probe reproduces the existing bound: no rows, no multipliers, constant 0.
  CHECK_FALSE(derive_ob_cut(lp, res, columns, 0, true, false, 0.4).has_value());
  CHECK(derive_ob_cut(lp, res, columns, 0, true, false, -1.0).has_value() ==
        (res.dual_objective > -1.0));
}

TEST_CASE("row cuts cap the binding constraint of the cap instance") {
  const Problem p = bilinear_cap();
  const auto jsets = compute_jsets(p);
  const LinearRelaxation r = build_relaxation(p, p.box, jsets);
  const LpResult res = solve_lp(make_lp(r));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-0.5));

  const double lp_bound = res.dual_objective + r.obj_offset;
  const std::vector<RowCut> cuts = derive_row_cuts(p, res, lp_bound);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].constraint == 0);
  CHECK(cuts[0].upper_side);
  CHECK(cuts[0].mu == doctest::Approx(0.5));
  CHECK(cuts[0].lp_bound == doctest::Approx(-0.5));

  // With U = -0.25 the cut reads x0 + x1 >= 0.5; every feasible point at or
  // below the incumbent satisfies it.
  const Constraint c = materialize_row_cut(cuts[0], p, -0.25);
  CHECK(c.rhs == doctest::Approx(1.0 - (-0.25 + 0.5) / 0.5));
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 60; ++j) {
      const double x0 = i / 60.0;
      const double x1 = j / 60.0;
      if (x0 + x1 > 1.0 || -x0 * x1 > -0.25) continue;
      CHECK(c.body.evaluate({x0, x1}) >= c.rhs - 1e-9);
    }
  }
}

TEST_CASE("equality rows emit cuts on the side their dual selects") {
  Problem p;
  p.num_vars = 2;
  p.box.lo = {0.0, 0.0};
  p.box.hi = {1.0, 1.0};
  p.objective.add_term(Monomial::var(0), -1.0);
  Constraint eq;
  eq.body.add_term(Monomial::var(0), 1.0);
  eq.body.add_term(Monomial::var(1), 1.0);
  eq.sense = Sense::Eq;
  eq.rhs = 0.8;
  p.constraints.push_back(eq);

  const auto jsets = compute_jsets(p);
  const LinearRelaxation r = build_relaxation(p, p.box, jsets);
  const LpResult res = solve_lp(make_lp(r));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-0.8));

  const double lp_bound = res.dual_objective + r.obj_offset;
  const std::vector<RowCut> cuts = derive_row_cuts(p, res, lp_bound);
  REQUIRE(cuts.size() == 1);
  CHECK_FALSE(cuts[0].upper_side);
  CHECK(cuts[0].mu == doctest::Approx(1.0));

  // body >= rhs - (U - L)/mu, trivially satisfied on the equality set.
  const Constraint c = materialize_row_cut(cuts[0], p, -0.7);
  CHECK(c.sense == Sense::Ge);
  CHECK(c.rhs == doctest::Approx(0.8 - 0.1));
  CHECK(c.body.evaluate({0.3, 0.5}) == doctest::Approx(0.8));
}

TEST_CASE("bound-tightening cuts hold on sampled feasible points") {
  SUBCASE("with incumbent on the cap instance") {
    const Problem p = bilinear_cap();
    const auto jsets = compute_jsets(p);
    LinearRelaxation r = build_relaxation(p, p.box, jsets);
    WorkClock clock(WorkClock::Mode::Wall);
    const ObbtReport rep =
        run_obbt(p, r, p.box, ObbtMode::Lp, 10.0, -0.25, clock);
    REQUIRE_FALSE(rep.proven_infeasible);
    REQUIRE_FALSE(rep.ob_cuts.empty());
    for (const ObCut& cut : rep.ob_cuts) {
      CHECK(cut.mu >= 0.0);
      for (const auto& [m, v] : cut.coefs) CHECK(std::fabs(v) > 1e-9);
      const Constraint c = materialize_ob_cut(cut, -0.25);
      // Only the optimum attains objective <= -0.25 under the cap.
      CHECK(c.body.evaluate({0.5, 0.5}) >= c.rhs - 1e-6);
    }
  }

  SUBCASE("without incumbent on a generated instance") {
    std::vector<double> anchor;
    const Problem p = generate_instance(2, 2, 0.7, 3, &anchor);
    const auto jsets = compute_jsets(p);
    LinearRelaxation r = build_relaxation(p, p.box, jsets);
    WorkClock clock(WorkClock::Mode::Wall);
    const ObbtReport rep =
        run_obbt(p, r, p.box, ObbtMode::Lp, 10.0, std::nullopt, clock);
    REQUIRE_FALSE(rep.proven_infeasible);

    std::vector<std::vector<double>> points = oracle::sample_feasible(p, 60, 17);
    points.push_back(anchor);
    for (const ObCut& cut : rep.ob_cuts) {
      CHECK(cut.mu == doctest::Approx(0.0));
      const Constraint c = materialize_ob_cut(cut, 0.0);
      for (const auto& pt : points) {
        CHECK(c.body.evaluate(pt) >= c.rhs - 1e-6);
      }
    }
  }
}
