#include <doctest.h>

#include <cmath>

#include "dssyk/errors.hpp"
#include "dssyk/mixed.hpp"
#include "dssyk/moments.hpp"
#include "test_support.hpp"

using namespace dssyk::moments;
using dssyk::qcore::make_rational;
using dssyk::qcore::Var;
using testsupport::poly;

namespace {

MultiPoly theta(int k) { return MultiPoly::theta_pow(k); }

// sum_{i<n} C(n,i) E[x^i] theta^(n-i), computed from rt_moment directly.
MultiPoly binomial_shift(int n) {
  MultiPoly s;
  for (int i = 0; i < n; i += 2)
    s += dssyk::qhermite::rt_moment(i / 2).scaled(Rational(dssyk::qcore::binomial(n, i))) * theta(n - i);
  return s;
}

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("conditional moment expansion") {
    CHECK(conditional_moment_expansion(0).coefficient(0) == MultiPoly(1));
    const auto e2 = conditional_moment_expansion(2);
    CHECK(e2.coefficient(2) == MultiPoly::qt_pow(2));
    CHECK(e2.coefficient(0) == MultiPoly(1));
    const auto e3 = conditional_moment_expansion(3);
    CHECK(e3.coefficient(3) == MultiPoly::qt_pow(3));
    CHECK(e3.coefficient(1) == poly({{{0, 1, 0}, 2}, {{1, 1, 0}, 1}}));
  }

  TEST_CASE("low reduced moments") {
    CHECK(reduced_moment(1) == theta(1));
    CHECK(reduced_moment(2) == theta(2));
    CHECK(reduced_moment(3) == theta(3) + theta(1).scaled(3));
    const MultiPoly m4 = theta(4) + theta(2).scaled(4) + (MultiPoly::qt_pow(1) * theta(2)).scaled(2);
    CHECK(reduced_moment(4) == m4);
    CHECK(reduced_moment_gf(1) == theta(1));
    CHECK(reduced_moment_gf(2) == theta(2));
    CHECK(reduced_moment_gf(4) == m4);
    CHECK_THROWS_AS(reduced_moment(0), dssyk::DomainError);
    CHECK_THROWS_AS(reduced_moment(kMaxMomentOrder + 1), dssyk::DomainError);
  }

  TEST_CASE("closed sum equals the generating-function route") {
    for (int n = 1; n <= 10; ++n) {
      CAPTURE(n);
      CHECK(reduced_moment(n) == reduced_moment_gf(n));
    }
  }

  TEST_CASE("closed sum equals the word-sum oracle") {
    for (int n = 1; n <= 8; ++n) {
      CAPTURE(n);
      MultiPoly w = dssyk::mixed::word_sum_moment(n);
      if (n % 2 == 0) w -= dssyk::qhermite::rt_moment(n / 2);
      CHECK(reduced_moment(n) == w);
    }
  }

  TEST_CASE("structure of m_n") {
    for (int n = 1; n <= 10; ++n) {
      const MultiPoly m = reduced_moment(n);
      CHECK(m.degree(Var::theta) == n);
      CHECK(m.coefficient({0, 0, n}) == 1);
      for (const auto& [e, c] : m.terms()) {
        CHECK(c > 0);
        CHECK((n - e.theta) % 2 == 0);
        CHECK(e.theta >= 1);
      }
    }
  }

  TEST_CASE("full moments") {
    const Rational r = make_rational(1, 4);
    CHECK(full_moment(1, r) == theta(1).scaled(r));
    CHECK(full_moment(2, r) == MultiPoly(1) + theta(2).scaled(r));
    CHECK(full_moment(4, r) == dssyk::qhermite::rt_moment(2) + reduced_moment(4).scaled(r));
    CHECK_THROWS_AS(full_moment(2, Rational(0)), dssyk::DomainError);
    CHECK_THROWS_AS(full_moment(2, Rational(2)), dssyk::DomainError);
    // r = 1 is the shift by theta: <(x + theta)^n>
    for (int n = 1; n <= 8; ++n)
      CHECK(full_moment(n, Rational(1)).specialize(Var::qt, Rational(1)) ==
            binomial_shift(n) + (n % 2 == 0 ? dssyk::qhermite::rt_moment(n / 2) : MultiPoly()));
  }

  TEST_CASE("Boolean c = 1 formula") {
    CHECK(boolean_moment_c1(2) == theta(2));
    CHECK(boolean_moment_c1(4) == theta(4) + theta(2).scaled(4));
    CHECK(boolean_moment_c1(5) ==
          theta(5) + theta(3).scaled(5) + (theta(1) * dssyk::qhermite::rt_moment(2)).scaled(5));
  }

  TEST_CASE("qt limits") {
    CHECK(qtilde_limit_check(4, 0) == theta(4) + theta(2).scaled(4));
    CHECK(qtilde_limit_check(2, 0) == theta(2));
    CHECK(qtilde_limit_check(2, 1) == theta(2));
    for (int n = 1; n <= 10; ++n) {
      CAPTURE(n);
      CHECK(reduced_moment(n).specialize(Var::qt, Rational(0)) == boolean_moment_c1(n));
      CHECK(reduced_moment(n).specialize(Var::qt, Rational(1)) == binomial_shift(n));
      CHECK_NOTHROW(qtilde_limit_check(n, 0));
      CHECK_NOTHROW(qtilde_limit_check(n, 1));
    }
    CHECK_THROWS_AS(qtilde_limit_check(3, 2), dssyk::DomainError);
  }

  TEST_CASE("moment table serialisation") {
    const MomentTable t = moment_table(4);
    CHECK(t.max_n == 4);
    CHECK(t.at(4) == reduced_moment(4));
    const std::string j = to_json(t);
    CHECK(j.find("\"moments\"") != std::string::npos);
    const std::string csv = to_csv(t, 0.5, 0.25, 2.0);
    CHECK(csv.find("n,m_n") == 0);
    CHECK(csv.find("\n2,4\n") != std::string::npos);
  }

  TEST_CASE("B series and continued fraction") {
    const BSeries s = b_series(12);
    CHECK(s.coeffs.size() == 13);
    CHECK(s.coeffs[0].degree() == -1);
    CHECK(s.coeffs[1].coefficient(0) == theta(1));
    const double z = 0.05, x0 = 0.3, q = 0.5, qt = 0.25;
    CHECK(std::abs(b_continued_fraction(z, x0, q, qt, 40) - b_series_value(s, z, x0, q, qt)) < 1e-9);
    for (double x : {-1.0, 0.0, 0.7})
      for (double zz : {0.02, 0.1}) {
        CHECK(std::abs(b_continued_fraction(zz, x, 0.3, 1.0, 40) - zz / (1.0 - x * zz)) < 1e-12);
        CHECK(std::abs(b_continued_fraction(zz, x, 0.7, 0.6, 60, 1.5) - b_series_value(b_series(16), zz, x, 0.7, 0.6, 1.5)) <
              1e-9);
      }
    CHECK(b_continued_fraction(1e-8, 0.4, 0.5, 0.5, 30, 2.0) / 1e-8 == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(b_continued_fraction(0.1, 0.0, 0.5, 0.5, 5), dssyk::DomainError);
  }

  TEST_CASE("Z_n") {
    CHECK(z_n(1, 0.0, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double q : {0.0, 0.5})
      for (int n = 1; n <= 3; ++n)
        for (double beta : {0.25, 0.5, 1.0}) CHECK(std::abs(z_n(n, beta, q, 0.0) - laplace_rt_series(n, beta, q)) < 1e-7);
    CHECK(std::abs(z_n(1, 1.0, 0.5, 0.25) - z_one_direct(1.0, 0.5, 0.25)) < 1e-9);
    CHECK(gamma_q(0.7, 0.0, 0.5) == 1.0);
    CHECK_THROWS_AS(z_n(0, 1.0, 0.5, 0.0), dssyk::DomainError);
  }
}
