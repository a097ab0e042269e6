#include "polyopt/config.hpp"

#include <stdexcept>

namespace polyopt {

namespace {

constexpr int kObCutPeriod = 50;
constexpr int kNbCutPeriod = 10;

}  // namespace

SolverConfig parse_config(const std::string& name) {
  SolverConfig cfg;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    const std::size_t next = name.find('+', pos);
    const std::string atom = name.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    pos = next == std::string::npos ? name.size() + 1 : next + 1;

    if (atom.empty() || atom == "baseline") {
      if (atom.empty() && !name.empty()) {
        throw std::invalid_argument("empty config atom in '" + name + "'");
      }
    } else if (atom == "socp") {
      cfg.obbt_mode = ObbtMode::Socp;
    } else if (atom == "sdp1") {
      cfg.obbt_mode = ObbtMode::Sdp1;
    } else if (atom == "sdp2") {
      cfg.obbt_mode = ObbtMode::Sdp2;
    } else if (atom == "fbbt-ob") {
      cfg.ob_cut_period = kObCutPeriod;
    } else if (atom == "fbbt-nb") {
      cfg.nb_cut_period = kNbCutPeriod;
    } else if (atom == "fbbt-ob-nb") {
      cfg.ob_cut_period = kObCutPeriod;
      cfg.nb_cut_period = kNbCutPeriod;
    } else if (atom == "bp-ov") {
      cfg.branch_point = BranchPointRule::Ov;
    } else if (atom == "bp-mp") {
      cfg.branch_point = BranchPointRule::Mp;
    } else if (atom.rfind("bp-mix-", 0) == 0) {
      const std::string w = atom.substr(7);
      std::size_t used = 0;
      double weight = 0.0;
      try {
        weight = std::stod(w, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad mix weight in '" + atom + "'");
      }
      if (used != w.size() || weight < 0.0 || weight > 1.0) {
        throw std::invalid_argument("bad mix weight in '" + atom + "'");
      }
      cfg.branch_point = BranchPointRule::Mix;
      cfg.mix_weight = weight;
    } else {
      throw std::invalid_argument("unknown config atom '" + atom + "'");
    }
  }
  return cfg;
}

std::vector<std::string> default_config_set() {
  return {"baseline",
          "socp",
          "fbbt-ob-nb",
          "bp-mix-0.5",
          "socp+fbbt-nb",
          "socp+bp-mix-0.5",
          "fbbt-ob-nb+bp-mix-0.5",
          "socp+fbbt-nb+bp-mix-0.5"};
}

}  // namespace polyopt
