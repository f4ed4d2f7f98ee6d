#pragma once

// Exact arithmetic foundation: rationals, sparse polynomials in the formal
// variables (q, qt, theta), and q-deformed integers, factorials, binomials.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dssyk::qcore {

/// Arbitrary precision rational, always canonical (lowest terms, den > 0).
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(std::string_view num, std::string_view den);

enum class Var { q, qt, theta };

/// Exponent triple of a monomial q^q qt^qt theta^theta.
struct Exponents {
  int q = 0;
  int qt = 0;
  int theta = 0;

  auto operator<=>(const Exponents&) const = default;
  Exponents operator+(const Exponents& o) const { return {q + o.q, qt + o.qt, theta + o.theta}; }
  int get(Var v) const;
};

/// Sparse polynomial over Q in q, qt, theta.
///
/// Terms are kept in a map ordered by exponent triple, so iteration order and
/// serialisation are canonical. Zero coefficients are never stored.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, Rational>;

  MultiPoly() = default;
  MultiPoly(long c);  // NOLINT(google-explicit-constructor)
  explicit MultiPoly(const Rational& c);

  static MultiPoly monomial(Exponents e, const Rational& c = 1);
  static MultiPoly q_pow(int k) { return monomial({k, 0, 0}); }
  static MultiPoly qt_pow(int k) { return monomial({0, k, 0}); }
  static MultiPoly theta_pow(int k) { return monomial({0, 0, k}); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Exponents& e) const;
  /// Highest exponent of `v` over all terms; -1 for the zero polynomial.
  int degree(Var v) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  MultiPoly operator-() const;
  MultiPoly scaled(const Rational& c) const;

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

  /// Adds c * x^e in place.
  void add_term(const Exponents& e, const Rational& c);
  /// Multiplies every term by the monomial x^e.
  MultiPoly shifted(const Exponents& e) const;

  Rational eval(const Rational& q, const Rational& qt, const Rational& theta) const;
  double eval(double q, double qt, double theta) const;
  /// Substitutes a rational value for one variable.
  MultiPoly specialize(Var v, const Rational& value) const;
  /// Maps qt^e to qt^(e/2); throws DomainError if an odd exponent occurs.
  MultiPoly halve_qt_exponents() const;
  /// Value at q = qt = theta = 1.
  Rational sum_of_coefficients() const;

  std::string to_string() const;

 private:
  TermMap terms_;
};

MultiPoly pow(const MultiPoly& p, int k);

// q-deformed integers. All results are polynomials in q alone.

/// [n]_q = 1 + q + ... + q^(n-1); zero for n = 0.
MultiPoly q_integer(int n);
/// [n]_q! = [1]_q [2]_q ... [n]_q; 1 for n = 0.
MultiPoly q_factorial(int n);
/// Gaussian binomial via the q-Pascal rule [n,k] = [n-1,k-1] + q^k [n-1,k].
MultiPoly q_binomial(int n, int k);
/// Gaussian binomial as [n]_q! / ([k]_q! [n-k]_q!) by exact division; test route.
MultiPoly q_binomial_by_division(int n, int k);
/// Product of nested q-binomials; requires sum(parts) == n.
MultiPoly q_multinomial(int n, std::span<const int> parts);

/// Exact division of univariate polynomials in q; throws if not divisible.
MultiPoly divide_exact_in_q(const MultiPoly& num, const MultiPoly& den);

// Integer helpers shared by several modules.
mpz_class binomial(long n, long k);
mpz_class factorial(long n);
mpz_class double_factorial_odd(long k);  ///< (2k-1)!!
mpz_class catalan(long k);

// JSON form: a list of {q, qt, theta, num, den} records in canonical order.
std::string to_json(const MultiPoly& p);
MultiPoly multipoly_from_json(std::string_view text);

}  // namespace dssyk::qcore
