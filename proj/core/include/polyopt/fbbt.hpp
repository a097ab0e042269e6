#pragma once

#include <optional>

#include "polyopt/cuts.hpp"
#include "polyopt/interval.hpp"
#include "polyopt/poly.hpp"

namespace polyopt {

struct FbbtResult {
  Box box;
  bool empty = false;
  int sweeps = 0;
};

/// Interval enclosure of a polynomial over a box.
Interval interval_eval(const Polynomial& p, const Box& box);

/// One feasibility-based pass of a single constraint over the box: forward
/// interval evaluation of the body, then backward inversion of each term.
/// For a term c * m the candidate interval for m is
/// (rhs interval - enclosure of the other terms) / c, which is then divided
/// by the enclosure of the co-factor per variable and de-powered; division by
/// an interval containing zero yields no tightening for that factor, and
/// even powers only tighten variables whose interval lies in one sign half.
/// Intervals narrower than 1e-10 are not shrunk further, but an empty
/// intersection is still reported. Returns false when the box is proven
/// infeasible for the constraint.
bool propagate_constraint(const Polynomial& body, Sense sense, double rhs,
                          Box& box);

/// Sweeps all constraints, then all materialized cuts, to a fixpoint: stops
/// when the largest relative width reduction of a sweep falls below 1e-4 or
/// after 10 sweeps. Cuts that need an incumbent are skipped when
/// `incumbent_value` is absent or below the cut's captured relaxation bound;
/// objective-side bound cuts with a zero cutoff multiplier are incumbent-free
/// and always participate. Equality constraints propagate in both
/// directions. `node_bound` is accepted for interface symmetry with the
/// search; propagation itself does not consume it.
FbbtResult fbbt_fixpoint(const Problem& problem, Box box, const CutPool& pool,
                         std::optional<double> incumbent_value,
                         std::optional<double> node_bound);

}  // namespace polyopt
