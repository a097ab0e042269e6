#include <stdexcept>

#include "doctest.h"
#include "polyopt/config.hpp"

using namespace polyopt;

TEST_CASE("baseline keeps every default") {
  const SolverConfig cfg = parse_config("baseline");
  CHECK(cfg.obbt_mode == ObbtMode::Lp);
  CHECK_FALSE(cfg.ob_cut_period.has_value());
  CHECK_FALSE(cfg.nb_cut_period.has_value());
  CHECK(cfg.branch_point == BranchPointRule::Ov);
}

TEST_CASE("single atoms set their one knob") {
  CHECK(parse_config("socp").obbt_mode == ObbtMode::Socp);
  CHECK(parse_config("sdp1").obbt_mode == ObbtMode::Sdp1);
  CHECK(parse_config("sdp2").obbt_mode == ObbtMode::Sdp2);

  const SolverConfig ob = parse_config("fbbt-ob");
  CHECK(ob.ob_cut_period == 50);
  CHECK_FALSE(ob.nb_cut_period.has_value());

  const SolverConfig nb = parse_config("fbbt-nb");
  CHECK(nb.nb_cut_period == 10);
  CHECK_FALSE(nb.ob_cut_period.has_value());

  const SolverConfig both = parse_config("fbbt-ob-nb");
  CHECK(both.ob_cut_period == 50);
  CHECK(both.nb_cut_period == 10);

  CHECK(parse_config("bp-ov").branch_point == BranchPointRule::Ov);
  CHECK(parse_config("bp-mp").branch_point == BranchPointRule::Mp);

  const SolverConfig mix = parse_config("bp-mix-0.25");
  CHECK(mix.branch_point == BranchPointRule::Mix);
  CHECK(mix.mix_weight == doctest::Approx(0.25));
}

TEST_CASE("atoms compose with plus") {
  const SolverConfig cfg = parse_config("socp+fbbt-nb+bp-mix-0.5");
  CHECK(cfg.obbt_mode == ObbtMode::Socp);
  CHECK_FALSE(cfg.ob_cut_period.has_value());
  CHECK(cfg.nb_cut_period == 10);
  CHECK(cfg.branch_point == BranchPointRule::Mix);
  CHECK(cfg.mix_weight == doctest::Approx(0.5));

  // baseline composes as a no-op.
  const SolverConfig noop = parse_config("baseline+sdp2");
  CHECK(noop.obbt_mode == ObbtMode::Sdp2);
}

TEST_CASE("unknown atoms and bad weights are rejected") {
  CHECK_THROWS_AS(parse_config("sdp3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("socp+fast"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("bp-mix-"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("bp-mix-1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("bp-mix--0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("bp-mix-0.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("socp++fbbt-nb"), std::invalid_argument);
}

TEST_CASE("the benchmark set has eight parseable members") {
  const std::vector<std::string> set = default_config_set();
  REQUIRE(set.size() == 8);
  CHECK(set[0] == "baseline");
  for (const std::string& name : set) {
    CHECK_NOTHROW(parse_config(name));
  }
  // Mix-rule members all weigh the relaxation point and midpoint equally.
  for (const std::string& name : set) {
    const SolverConfig cfg = parse_config(name);
    if (cfg.branch_point == BranchPointRule::Mix) {
      CHECK(cfg.mix_weight == doctest::Approx(0.5));
    }
  }
}
