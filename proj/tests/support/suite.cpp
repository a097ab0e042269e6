#include "support/suite.hpp"

#include <cstdio>

#include "polyopt/instance_gen.hpp"

namespace polyopt::oracle {

namespace {

Problem box_problem(int n) {
  Problem p;
  p.num_vars = n;
  p.box.lo.assign(static_cast<std::size_t>(n), 0.0);
  p.box.hi.assign(static_cast<std::size_t>(n), 1.0);
  return p;
}

std::vector<SuiteInstance> build_analytic() {
  std::vector<SuiteInstance> out;

  {
    // min -x0*x1 s.t. x0 + x1 <= 1: optimum -0.25 at (0.5, 0.5).
    SuiteInstance s;
    s.name = "analytic_bilinear_cap";
    s.problem = box_problem(2);
    s.problem.objective.add_term(Monomial::from_vars({0, 1}), -1.0);
    Constraint c;
    c.body.add_term(Monomial::var(0), -1.0);
    c.body.add_term(Monomial::var(1), -1.0);
    c.sense = Sense::Ge;
    c.rhs = -1.0;
    s.problem.constraints.push_back(c);
    s.known_optimum = -0.25;
    s.feasible_point = {0.5, 0.5};
    out.push_back(std::move(s));
  }
  {
    // min x0*x1 s.t. x0 + x1 >= 1: optimum 0 at (1, 0).
    SuiteInstance s;
    s.name = "analytic_bilinear_floor";
    s.problem = box_problem(2);
    s.problem.objective.add_term(Monomial::from_vars({0, 1}), 1.0);
    Constraint c;
    c.body.add_term(Monomial::var(0), 1.0);
    c.body.add_term(Monomial::var(1), 1.0);
    c.sense = Sense::Ge;
    c.rhs = 1.0;
    s.problem.constraints.push_back(c);
    s.known_optimum = 0.0;
    s.feasible_point = {1.0, 0.0};
    out.push_back(std::move(s));
  }
  {
    // min x0^2 - x0, unconstrained: optimum -0.25 at 0.5.
    SuiteInstance s;
    s.name = "analytic_convex_quadratic";
    s.problem = box_problem(1);
    s.problem.objective.add_term(Monomial::var(0, 2), 1.0);
    s.problem.objective.add_term(Monomial::var(0), -1.0);
    s.known_optimum = -0.25;
    s.feasible_point = {0.5};
    out.push_back(std::move(s));
  }
  {
    // min -x0^2 + 0.6*x0 - 0.09, concave: optimum -0.49 at x0 = 1.
    SuiteInstance s;
    s.name = "analytic_concave_quadratic";
    s.problem = box_problem(1);
    s.problem.objective.add_term(Monomial::var(0, 2), -1.0);
    s.problem.objective.add_term(Monomial::var(0), 0.6);
    s.problem.objective.add_term(Monomial::one(), -0.09);
    s.known_optimum = -0.49;
    s.feasible_point = {1.0};
    out.push_back(std::move(s));
  }
  {
    // min -x0*x1*x2 s.t. x0 + x1 + x2 = 1.5: optimum -0.125 at (0.5)^3.
    SuiteInstance s;
    s.name = "analytic_cubic_product";
    s.problem = box_problem(3);
    s.problem.objective.add_term(Monomial::from_vars({0, 1, 2}), -1.0);
    Constraint c;
    c.body.add_term(Monomial::var(0), 1.0);
    c.body.add_term(Monomial::var(1), 1.0);
    c.body.add_term(Monomial::var(2), 1.0);
    c.sense = Sense::Eq;
    c.rhs = 1.5;
    s.problem.constraints.push_back(c);
    s.known_optimum = -0.125;
    s.feasible_point = {0.5, 0.5, 0.5};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SuiteInstance> build_suite() {
  std::vector<SuiteInstance> out;
  const int sizes[] = {2, 3, 4};
  const int degrees[] = {2, 3};
  for (int i = 0; i < 20; ++i) {
    SuiteInstance s;
    const int n = sizes[i % 3];
    const int degree = degrees[(i / 3) % 2];
    const std::uint64_t seed = static_cast<std::uint64_t>(i + 1);
    char name[64];
    std::snprintf(name, sizeof(name), "gen_n%d_d%d_s%02d", n, degree, i + 1);
    s.name = name;
    s.problem = generate_instance(n, degree, 0.5, seed, &s.feasible_point);
    out.push_back(std::move(s));
  }
  for (SuiteInstance& s : build_analytic()) out.push_back(std::move(s));
  return out;
}

}  // namespace

const std::vector<SuiteInstance>& frozen_suite() {
  static const std::vector<SuiteInstance> suite = build_suite();
  return suite;
}

std::vector<SuiteInstance> generated_suite() {
  const auto& all = frozen_suite();
  return {all.begin(), all.begin() + 20};
}

std::vector<SuiteInstance> analytic_suite() {
  const auto& all = frozen_suite();
  return {all.begin() + 20, all.end()};
}

}  // namespace polyopt::oracle
