#include "polyopt/poly.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace polyopt {

Monomial Monomial::from_exponents(const std::vector<std::pair<int, int>>& exps) {
  std::map<int, int> merged;
  for (const auto& [j, p] : exps) {
    if (p < 0) throw std::invalid_argument("negative exponent");
    if (p > 0) merged[j] += p;
  }
  Monomial m;
  m.factors_.assign(merged.begin(), merged.end());
  return m;
}

Monomial Monomial::from_vars(const std::vector<int>& vars) {
  std::vector<std::pair<int, int>> exps;
  exps.reserve(vars.size());
  for (int j : vars) exps.emplace_back(j, 1);
  return from_exponents(exps);
}

Monomial Monomial::var(int j, int mult) {
  return from_exponents({{j, mult}});
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& [j, p] : factors_) d += p;
  return d;
}

int Monomial::multiplicity(int j) const {
  for (const auto& [v, p] : factors_)
    if (v == j) return p;
  return 0;
}

Monomial Monomial::times(const Monomial& o) const {
  std::vector<std::pair<int, int>> exps = factors_;
  exps.insert(exps.end(), o.factors_.begin(), o.factors_.end());
  return from_exponents(exps);
}

bool Monomial::contains(const Monomial& o) const {
  for (const auto& [j, p] : o.factors_)
    if (multiplicity(j) < p) return false;
  return true;
}

std::vector<int> Monomial::support() const {
  std::vector<int> s;
  s.reserve(factors_.size());
  for (const auto& [j, p] : factors_) s.push_back(j);
  return s;
}

std::vector<int> Monomial::expanded() const {
  std::vector<int> e;
  for (const auto& [j, p] : factors_)
    for (int k = 0; k < p; ++k) e.push_back(j);
  return e;
}

std::string Monomial::to_string() const {
  if (is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [j, p] : factors_) {
    if (!first) os << "*";
    first = false;
    os << "x" << j;
    if (p > 1) os << "^" << p;
  }
  return os.str();
}

bool MonomialGradedLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.expanded() < b.expanded();
}

Polynomial Polynomial::constant(double c) {
  Polynomial p;
  p.add_term(Monomial::one(), c);
  return p;
}

void Polynomial::add_term(const Monomial& m, double coef) {
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (std::abs(coef) > kCoefDropTol) terms_.emplace(m, coef);
    return;
  }
  it->second += coef;
  if (std::abs(it->second) <= kCoefDropTol) terms_.erase(it);
}

void Polynomial::add(const Polynomial& o, double scale) {
  for (const auto& [m, c] : o.terms_) add_term(m, scale * c);
}

Polynomial Polynomial::scaled(double s) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.add_term(m, s * c);
  return r;
}

Polynomial Polynomial::times(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma.times(mb), ca * cb);
  return r;
}

Polynomial Polynomial::translated(const std::vector<double>& shift) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    Polynomial term = Polynomial::constant(c);
    for (const auto& [j, p] : m.factors()) {
      Polynomial lin;
      lin.add_term(Monomial::var(j), 1.0);
      lin.add_term(Monomial::one(), shift[static_cast<std::size_t>(j)]);
      for (int k = 0; k < p; ++k) term = term.times(lin);
    }
    r.add(term);
  }
  return r;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
  double v = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (const auto& [j, p] : m.factors()) {
      double b = x[static_cast<std::size_t>(j)];
      for (int k = 0; k < p; ++k) t *= b;
    }
    v += t;
  }
  return v;
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    if (!m.is_one()) os << "*" << m.to_string();
  }
  return os.str();
}

bool Box::contains(const std::vector<double>& x, double tol) const {
  for (int j = 0; j < size(); ++j) {
    auto uj = static_cast<std::size_t>(j);
    if (x[uj] < lo[uj] - tol || x[uj] > hi[uj] + tol) return false;
  }
  return true;
}

int Problem::degree() const {
  int d = objective.degree();
  for (const auto& c : constraints) d = std::max(d, c.body.degree());
  return d;
}

void Problem::validate() const {
  if (num_vars <= 0) throw std::invalid_argument("problem has no variables");
  if (box.size() != num_vars)
    throw std::invalid_argument("box size does not match num_vars");
  auto check_poly = [&](const Polynomial& p, const char* where) {
    for (const auto& [m, c] : p.terms()) {
      if (!std::isfinite(c))
        throw std::invalid_argument(std::string("non-finite coefficient in ") + where);
      for (const auto& [j, pw] : m.factors())
        if (j < 0 || j >= num_vars)
          throw std::invalid_argument(std::string("variable index out of range in ") + where);
    }
  };
  check_poly(objective, "objective");
  for (const auto& c : constraints) check_poly(c.body, "constraint");
  for (int j = 0; j < num_vars; ++j) {
    auto uj = static_cast<std::size_t>(j);
    if (!std::isfinite(box.lo[uj]) || !std::isfinite(box.hi[uj]))
      throw std::invalid_argument("variable bounds must be finite");
    if (box.lo[uj] < 0.0)
      throw std::invalid_argument("variable lower bounds must be nonnegative");
    if (box.lo[uj] > box.hi[uj])
      throw std::invalid_argument("variable lower bound exceeds upper bound");
  }
}

std::vector<Monomial> compute_jsets(const Problem& p) {
  std::set<Monomial, MonomialGradedLess> present;
  auto collect = [&](const Polynomial& poly) {
    for (const auto& [m, c] : poly.terms())
      if (m.degree() > 1) present.insert(m);
  };
  collect(p.objective);
  for (const auto& c : p.constraints) collect(c.body);

  std::vector<Monomial> maximal;
  for (const auto& m : present) {
    bool dominated = false;
    for (const auto& o : present) {
      if (o != m && o.contains(m)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(m);
  }
  return maximal;
}

}  // namespace polyopt
