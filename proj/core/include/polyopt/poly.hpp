#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polyopt {

/// A monomial over variables x_0..x_{n-1}, stored as sorted (variable,
/// multiplicity) pairs with multiplicity > 0. The empty monomial is the
/// constant 1.
class Monomial {
 public:
  Monomial() = default;

  /// Builds from an arbitrary exponent list; merges duplicates, drops zeros.
  static Monomial from_exponents(const std::vector<std::pair<int, int>>& exps);

  /// The multiset product of x_{vars[0]} * x_{vars[1]} * ...
  static Monomial from_vars(const std::vector<int>& vars);

  static Monomial one() { return Monomial(); }
  static Monomial var(int j, int mult = 1);

  bool is_one() const { return factors_.empty(); }
  int degree() const;
  int multiplicity(int j) const;

  const std::vector<std::pair<int, int>>& factors() const { return factors_; }

  Monomial times(const Monomial& o) const;
  Monomial times_var(int j) const { return times(var(j)); }

  /// Multiset inclusion: every variable of `o` appears here with at least
  /// the same multiplicity.
  bool contains(const Monomial& o) const;

  /// Distinct variables, ascending.
  std::vector<int> support() const;

  /// The full index sequence with repeats, ascending (x_1^2 x_3 -> 1,1,3).
  std::vector<int> expanded() const;

  std::string to_string() const;

  bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

 private:
  std::vector<std::pair<int, int>> factors_;
};

/// Graded lexicographic order: lower total degree first, ties broken by the
/// expanded index sequence. Total and deterministic, used everywhere a
/// monomial collection needs a reproducible iteration order.
struct MonomialGradedLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse polynomial: monomial -> coefficient. Coefficients with magnitude
/// <= 1e-12 are dropped on insertion so the zero polynomial has no terms.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, MonomialGradedLess>;

  static constexpr double kCoefDropTol = 1e-12;

  Polynomial() = default;
  static Polynomial constant(double c);

  void add_term(const Monomial& m, double coef);
  void add(const Polynomial& o, double scale = 1.0);
  Polynomial scaled(double s) const;
  Polynomial times(const Polynomial& o) const;

  /// Substitutes x_j -> x_j + shift[j] for every variable.
  Polynomial translated(const std::vector<double>& shift) const;

  int degree() const;
  double evaluate(const std::vector<double>& x) const;
  double coefficient(const Monomial& m) const;
  double constant_term() const { return coefficient(Monomial::one()); }

  bool empty() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  std::string to_string() const;

 private:
  TermMap terms_;
};

enum class Sense : std::uint8_t { Ge, Eq };

struct Constraint {
  Polynomial body;
  Sense sense = Sense::Ge;
  double rhs = 0.0;
};

/// Variable box l <= x <= u. Invariant: lo[j] <= hi[j] for all j.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int size() const { return static_cast<int>(lo.size()); }
  double width(int j) const { return hi[j] - lo[j]; }
  bool contains(const std::vector<double>& x, double tol = 0.0) const;
};

/// Box-constrained polynomial program
///   min objective(x)  s.t.  constraints, x in box.
/// Variables are required to have finite bounds with 0 <= lo.
struct Problem {
  int num_vars = 0;
  Polynomial objective;
  std::vector<Constraint> constraints;
  Box box;

  int degree() const;
  /// Throws std::invalid_argument on malformed input (bad variable index,
  /// lo > hi, negative or non-finite bounds).
  void validate() const;
};

/// The monomials of degree > 1 appearing in the problem that are maximal
/// under multiset inclusion, in graded-lex order. These drive both the
/// lifting (one auxiliary column per distinct sub-monomial) and the
/// bound-factor constraint generation.
std::vector<Monomial> compute_jsets(const Problem& p);

}  // namespace polyopt
