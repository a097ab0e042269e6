#pragma once

#include <cstdint>
#include <vector>

#include "polyopt/poly.hpp"

namespace polyopt {

/// All monomials over `num_vars` variables with degree <= max_degree
/// (constant included), in graded-lex order.
std::vector<Monomial> monomial_pool(int num_vars, int max_degree);

/// Random box-constrained polynomial program on [0,1]^n, bit-exact per seed:
/// ceil(density * C(n + degree - 1, degree)) distinct monomials are drawn
/// from the degree <= `degree` pool, the objective and each of 2..5
/// constraints take random subsets of them with coefficients uniform in
/// [-10, 10], and every right-hand side is the body's value at a shared
/// interior anchor point, which keeps the instance feasible. Constraint
/// senses are >= with probability 0.7, = otherwise. `anchor_out`, when
/// given, receives the anchor (a feasibility witness).
Problem generate_instance(int num_vars, int degree, double density,
                          std::uint64_t seed,
                          std::vector<double>* anchor_out = nullptr);

}  // namespace polyopt
