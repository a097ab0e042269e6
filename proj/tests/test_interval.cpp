#include <cmath>

#include "doctest.h"
#include "polyopt/interval.hpp"

using namespace polyopt;

TEST_CASE("interval arithmetic basics") {
  const Interval a{1.0, 2.0};
  const Interval b{-3.0, 4.0};

  const Interval sum = a + b;
  CHECK(sum.lo == doctest::Approx(-2.0));
  CHECK(sum.hi == doctest::Approx(6.0));

  const Interval diff = a - b;
  CHECK(diff.lo == doctest::Approx(-3.0));
  CHECK(diff.hi == doctest::Approx(5.0));

  const Interval prod = a * b;
  CHECK(prod.lo == doctest::Approx(-6.0));
  CHECK(prod.hi == doctest::Approx(8.0));

  const Interval scaled = -2.0 * a;
  CHECK(scaled.lo == doctest::Approx(-4.0));
  CHECK(scaled.hi == doctest::Approx(-2.0));
}

TEST_CASE("empty interval propagates") {
  const Interval e = Interval::empty();
  CHECK(e.is_empty());
  CHECK((e + Interval{0.0, 1.0}).is_empty());
  CHECK((e * Interval{0.0, 1.0}).is_empty());
  CHECK(intersect(e, Interval{0.0, 1.0}).is_empty());
  CHECK(root(e, 2).is_empty());
}

TEST_CASE("power handles signs") {
  const Interval sq = power(Interval{-1.0, 2.0}, 2);
  CHECK(sq.lo == doctest::Approx(0.0));
  CHECK(sq.hi == doctest::Approx(4.0));

  const Interval cube = power(Interval{-2.0, 1.0}, 3);
  CHECK(cube.lo == doctest::Approx(-8.0));
  CHECK(cube.hi == doctest::Approx(1.0));

  const Interval p0 = power(Interval{-5.0, 5.0}, 0);
  CHECK(p0.lo == doctest::Approx(1.0));
  CHECK(p0.hi == doctest::Approx(1.0));
}

TEST_CASE("divide widens to the entire line when 0 is inside") {
  CHECK(divide(Interval{1.0, 2.0}, Interval{-1.0, 1.0}).is_entire());

  const Interval q = divide(Interval{1.0, 6.0}, Interval{2.0, 3.0});
  CHECK(q.lo == doctest::Approx(1.0 / 3.0));
  CHECK(q.hi == doctest::Approx(3.0));

  const Interval qn = divide(Interval{1.0, 6.0}, Interval{-3.0, -2.0});
  CHECK(qn.lo == doctest::Approx(-3.0));
  CHECK(qn.hi == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("root branches") {
  const Interval even = root(Interval{4.0, 9.0}, 2);
  CHECK(even.lo == doctest::Approx(2.0));
  CHECK(even.hi == doctest::Approx(3.0));

  CHECK(root(Interval{-5.0, -1.0}, 2).is_empty());

  const Interval eclip = root(Interval{-5.0, 9.0}, 2);
  CHECK(eclip.lo == doctest::Approx(0.0));
  CHECK(eclip.hi == doctest::Approx(3.0));

  const Interval odd = root(Interval{-8.0, 27.0}, 3);
  CHECK(odd.lo == doctest::Approx(-2.0));
  CHECK(odd.hi == doctest::Approx(3.0));
}

TEST_CASE("intersect and hull") {
  const Interval a{0.0, 2.0};
  const Interval b{1.0, 5.0};
  const Interval i = intersect(a, b);
  CHECK(i.lo == doctest::Approx(1.0));
  CHECK(i.hi == doctest::Approx(2.0));
  CHECK(intersect(Interval{0.0, 1.0}, Interval{2.0, 3.0}).is_empty());

  const Interval h = hull(Interval{0.0, 1.0}, Interval{2.0, 3.0});
  CHECK(h.lo == doctest::Approx(0.0));
  CHECK(h.hi == doctest::Approx(3.0));
}

TEST_CASE("unbounded endpoints survive arithmetic") {
  const Interval half{0.0, std::numeric_limits<double>::infinity()};
  const Interval shifted = half - Interval::point(3.0);
  CHECK(shifted.lo == doctest::Approx(-3.0));
  CHECK(std::isinf(shifted.hi));

  const Interval prod = Interval{-1.0, 1.0} * half;
  CHECK(prod.is_entire());
}
