#pragma once

#include <limits>

namespace polyopt {

/// Closed interval [lo, hi], possibly unbounded on either side. The empty
/// interval is canonically [+inf, -inf]; every operation accepts and
/// propagates it.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval entire() { return {}; }
  static Interval empty();
  static Interval point(double v) { return {v, v}; }
  static Interval of(double lo, double hi) { return {lo, hi}; }

  bool is_empty() const { return lo > hi; }
  bool is_entire() const;
  bool contains(double v) const { return !is_empty() && lo <= v && v <= hi; }
  bool contains_zero() const { return contains(0.0); }
  double width() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(double s, const Interval& a);

/// Interval quotient a / b. When b contains zero the quotient carries no
/// information for our purposes and the entire line is returned.
Interval divide(const Interval& a, const Interval& b);

/// x^p for integer p >= 0.
Interval power(const Interval& a, int p);

/// The set {x >= 0 : x^p in a} for even p, or {x : x^p in a} for odd p.
/// Even roots return the nonnegative branch; callers choose the sign branch
/// from context. Empty when a is empty, or when p is even and a.hi < 0.
Interval root(const Interval& a, int p);

Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

}  // namespace polyopt
