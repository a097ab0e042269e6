#include "polyopt/interval.hpp"

#include <algorithm>
#include <cmath>

namespace polyopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Product bound with the 0 * inf = 0 convention.
double pmul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

double nth_root(double v, int p) {
  if (v == kInf) return kInf;
  if (v == -kInf) return -kInf;
  if (p == 2) return v < 0 ? -std::sqrt(-v) : std::sqrt(v);
  if (p == 3) return std::cbrt(v);
  double r = std::pow(std::abs(v), 1.0 / p);
  return v < 0 ? -r : r;
}

}  // namespace

Interval Interval::empty() { return {kInf, -kInf}; }

bool Interval::is_entire() const { return lo == -kInf && hi == kInf; }

double Interval::width() const {
  if (is_empty()) return 0.0;
  return hi - lo;
}

Interval operator+(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return {a.lo + b.lo, a.hi + b.hi};
}

Interval operator-(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return {a.lo - b.hi, a.hi - b.lo};
}

Interval operator-(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  return {-a.hi, -a.lo};
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  double c1 = pmul(a.lo, b.lo), c2 = pmul(a.lo, b.hi);
  double c3 = pmul(a.hi, b.lo), c4 = pmul(a.hi, b.hi);
  return {std::min({c1, c2, c3, c4}), std::max({c1, c2, c3, c4})};
}

Interval operator*(double s, const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  if (s == 0.0) return Interval::point(0.0);
  if (s > 0.0) return {s * a.lo, s * a.hi};
  return {s * a.hi, s * a.lo};
}

Interval divide(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  if (b.contains_zero()) return Interval::entire();
  double c1 = a.lo / b.lo, c2 = a.lo / b.hi;
  double c3 = a.hi / b.lo, c4 = a.hi / b.hi;
  return {std::min({c1, c2, c3, c4}), std::max({c1, c2, c3, c4})};
}

Interval power(const Interval& a, int p) {
  if (a.is_empty()) return Interval::empty();
  if (p == 0) return Interval::point(1.0);
  if (p == 1) return a;
  auto ip = [p](double v) {
    if (v == kInf) return kInf;
    if (v == -kInf) return (p % 2 == 0) ? kInf : -kInf;
    return std::pow(v, p);
  };
  if (p % 2 == 1) return {ip(a.lo), ip(a.hi)};
  if (a.lo >= 0.0) return {ip(a.lo), ip(a.hi)};
  if (a.hi <= 0.0) return {ip(a.hi), ip(a.lo)};
  return {0.0, std::max(ip(a.lo), ip(a.hi))};
}

Interval root(const Interval& a, int p) {
  if (a.is_empty()) return Interval::empty();
  if (p == 1) return a;
  if (p % 2 == 1) return {nth_root(a.lo, p), nth_root(a.hi, p)};
  if (a.hi < 0.0) return Interval::empty();
  double lo = a.lo <= 0.0 ? 0.0 : nth_root(a.lo, p);
  return {lo, nth_root(a.hi, p)};
}

Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.lo > r.hi) return Interval::empty();
  return r;
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace polyopt
