#pragma once

#include <string>
#include <vector>

#include "polyopt/bnb.hpp"

namespace polyopt {

/// Parses a solver configuration name: '+'-joined atoms from
///   baseline | socp | sdp1 | sdp2
///   fbbt-ob | fbbt-nb | fbbt-ob-nb
///   bp-ov | bp-mp | bp-mix-<weight>
/// e.g. "socp+fbbt-nb+bp-mix-0.5". Throws std::invalid_argument on unknown
/// atoms. Limits and the clock mode keep their defaults; callers set those.
SolverConfig parse_config(const std::string& name);

/// The eight-configuration benchmark set.
std::vector<std::string> default_config_set();

}  // namespace polyopt
