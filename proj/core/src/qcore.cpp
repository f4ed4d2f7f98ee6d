#include "dssyk/qcore.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dssyk/errors.hpp"

namespace dssyk::qcore {

Rational make_rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(std::string_view num, std::string_view den) {
  mpz_class n, d;
  if (n.set_str(std::string(num), 10) != 0 || d.set_str(std::string(den), 10) != 0)
    throw DomainError("malformed rational '" + std::string(num) + "/" + std::string(den) + "'");
  if (d == 0) throw DomainError("rational with zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

int Exponents::get(Var v) const {
  switch (v) {
    case Var::q: return q;
    case Var::qt: return qt;
    case Var::theta: return theta;
  }
  return 0;
}

MultiPoly::MultiPoly(long c) {
  if (c != 0) terms_.emplace(Exponents{}, Rational(c));
}

MultiPoly::MultiPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Exponents{}, c);
}

MultiPoly MultiPoly::monomial(Exponents e, const Rational& c) {
  if (e.q < 0 || e.qt < 0 || e.theta < 0) throw DomainError("negative exponent in monomial");
  MultiPoly p;
  if (c != 0) p.terms_.emplace(e, c);
  return p;
}

Rational MultiPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int MultiPoly::degree(Var v) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.get(v));
  return d;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out;
  Rational prod;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      prod = ca * cb;
      out.add_term(ea + eb, prod);
    }
  }
  return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  *this = *this * o;
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const { return scaled(Rational(-1)); }

MultiPoly MultiPoly::scaled(const Rational& c) const {
  MultiPoly out = *this;
  out *= c;
  return out;
}

MultiPoly MultiPoly::shifted(const Exponents& e) const {
  MultiPoly out;
  for (const auto& [f, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), f + e, c);
  return out;
}

namespace {

template <typename T>
T power(T base, int k) {
  T r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace

Rational MultiPoly::eval(const Rational& q, const Rational& qt, const Rational& theta) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    t *= power<Rational>(q, e.q);
    t *= power<Rational>(qt, e.qt);
    t *= power<Rational>(theta, e.theta);
    sum += t;
  }
  return sum;
}

double MultiPoly::eval(double q, double qt, double theta) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_)
    sum += c.get_d() * power<double>(q, e.q) * power<double>(qt, e.qt) * power<double>(theta, e.theta);
  return sum;
}

MultiPoly MultiPoly::specialize(Var v, const Rational& value) const {
  MultiPoly out;
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    int k = 0;
    switch (v) {
      case Var::q: k = f.q; f.q = 0; break;
      case Var::qt: k = f.qt; f.qt = 0; break;
      case Var::theta: k = f.theta; f.theta = 0; break;
    }
    out.add_term(f, c * power<Rational>(value, k));
  }
  return out;
}

MultiPoly MultiPoly::halve_qt_exponents() const {
  MultiPoly out;
  for (const auto& [e, c] : terms_) {
    if (e.qt % 2 != 0)
      throw DomainError("half-integer power of qt survives in " + to_string());
    out.add_term({e.q, e.qt / 2, e.theta}, c);
  }
  return out;
}

Rational MultiPoly::sum_of_coefficients() const {
  Rational s = 0;
  for (const auto& [e, c] : terms_) s += c;
  return s;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest exponents first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const Rational mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    std::vector<std::string> factors;
    const bool has_var = e.q || e.qt || e.theta;
    if (!has_var || mag != 1) factors.push_back(mag.get_str());
    auto var = [&](const char* name, int k) {
      if (k == 1) factors.emplace_back(name);
      if (k > 1) factors.push_back(std::string(name) + "^" + std::to_string(k));
    };
    var("theta", e.theta);
    var("qt", e.qt);
    var("q", e.q);
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
    first = false;
  }
  return os.str();
}

MultiPoly pow(const MultiPoly& p, int k) {
  if (k < 0) throw DomainError("negative power of a polynomial");
  MultiPoly r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

MultiPoly q_integer(int n) {
  if (n < 0) throw DomainError("q_integer: negative argument");
  MultiPoly p;
  for (int i = 0; i < n; ++i) p.add_term({i, 0, 0}, 1);
  return p;
}

MultiPoly q_factorial(int n) {
  if (n < 0) throw DomainError("q_factorial: negative argument");
  MultiPoly p = 1;
  for (int k = 1; k <= n; ++k) p *= q_integer(k);
  return p;
}

MultiPoly q_binomial(int n, int k) {
  if (n < 0 || k < 0) throw DomainError("q_binomial: negative argument");
  if (k > n) throw DomainError("q_binomial: k > n");
  // Row of the q-Pascal triangle, row[j] = [m choose j]_q.
  std::vector<MultiPoly> row{MultiPoly(1)};
  for (int m = 1; m <= n; ++m) {
    std::vector<MultiPoly> next(static_cast<std::size_t>(m) + 1);
    next[0] = 1;
    next[static_cast<std::size_t>(m)] = 1;
    for (int j = 1; j < m; ++j)
      next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j) - 1] + row[static_cast<std::size_t>(j)].shifted({j, 0, 0});
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

MultiPoly divide_exact_in_q(const MultiPoly& num, const MultiPoly& den) {
  if (den.is_zero()) throw DomainError("division by the zero polynomial");
  auto check_univariate = [](const MultiPoly& p) {
    for (const auto& [e, c] : p.terms())
      if (e.qt != 0 || e.theta != 0) throw DomainError("divide_exact_in_q expects polynomials in q only");
  };
  check_univariate(num);
  check_univariate(den);
  const int dd = den.degree(Var::q);
  const Rational lead = den.coefficient({dd, 0, 0});
  MultiPoly rem = num;
  MultiPoly quot;
  while (!rem.is_zero() && rem.degree(Var::q) >= dd) {
    const int rd = rem.degree(Var::q);
    Rational c = rem.coefficient({rd, 0, 0}) / lead;
    MultiPoly t = MultiPoly::monomial({rd - dd, 0, 0}, c);
    quot += t;
    rem -= t * den;
  }
  if (!rem.is_zero()) throw DomainError("polynomial division leaves remainder " + rem.to_string());
  return quot;
}

MultiPoly q_binomial_by_division(int n, int k) {
  if (n < 0 || k < 0) throw DomainError("q_binomial: negative argument");
  if (k > n) throw DomainError("q_binomial: k > n");
  return divide_exact_in_q(q_factorial(n), q_factorial(k) * q_factorial(n - k));
}

MultiPoly q_multinomial(int n, std::span<const int> parts) {
  long total = 0;
  for (int p : parts) {
    if (p < 0) throw DomainError("q_multinomial: negative part");
    total += p;
  }
  if (total != n) throw DomainError("q_multinomial: parts do not sum to n");
  MultiPoly out = 1;
  int remaining = n;
  for (int p : parts) {
    out *= q_binomial(remaining, p);
    remaining -= p;
  }
  return out;
}

mpz_class binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

mpz_class factorial(long n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

mpz_class double_factorial_odd(long k) {
  mpz_class r = 1;
  for (long i = 1; i <= 2 * k - 1; i += 2) r *= i;
  return r;
}

mpz_class catalan(long k) { return binomial(2 * k, k) / (k + 1); }

}  // namespace dssyk::qcore
