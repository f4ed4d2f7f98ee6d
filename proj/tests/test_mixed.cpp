#include <doctest.h>

#include <algorithm>

#include "dssyk/errors.hpp"
#include "dssyk/mixed.hpp"
#include "dssyk/qhermite.hpp"
#include "test_support.hpp"

using namespace dssyk::mixed;
using dssyk::qcore::Var;
using testsupport::poly;
using testsupport::q_poly;

namespace {

MultiPoly phi(const char* w) { return mixed_moment(Word::parse(w)).value; }

// Boolean (qt = 0) oracle: x-chords may not straddle a d, so the word splits
// into its maximal x-runs, each contributing a Gaussian moment.
MultiPoly boolean_oracle(const Word& w) {
  const int n = static_cast<int>(w.letters.size());
  const int nd = w.count(Letter::D);
  if (nd == 0) return w.count(Letter::X) % 2 ? MultiPoly() : dssyk::qhermite::rt_moment(n / 2);
  // rotate so the word starts with a d; runs are then linear
  std::vector<Letter> l = w.letters;
  std::rotate(l.begin(), std::find(l.begin(), l.end(), Letter::D), l.end());
  MultiPoly v = MultiPoly::theta_pow(nd);
  int run = 0;
  for (std::size_t i = 0; i <= l.size(); ++i) {
    if (i < l.size() && l[i] == Letter::X) {
      ++run;
      continue;
    }
    if (run % 2) return MultiPoly();
    v *= dssyk::qhermite::rt_moment(run / 2);
    run = 0;
  }
  return v;
}

Word word_of(unsigned mask, int n) {
  Word w;
  for (int i = 0; i < n; ++i) w.letters.push_back((mask >> i) & 1u ? Letter::D : Letter::X);
  return w;
}

}  // namespace

TEST_SUITE("mixed") {
  TEST_CASE("word parsing") {
    CHECK(Word::parse("XdXd").to_string() == "xdxd");
    CHECK(Word::parse("xxd").count(Letter::X) == 2);
    CHECK_THROWS_AS(Word::parse("xy"), dssyk::DomainError);
    CHECK_THROWS_AS(Word::parse(""), dssyk::DomainError);
  }

  TEST_CASE("worked examples") {
    CHECK(phi("xdxd") == poly({{{0, 1, 2}, 1}}));
    CHECK(phi("xxdd") == MultiPoly::theta_pow(2));
    CHECK(phi("xxxx") == q_poly({2, 1}));
    CHECK(phi("xxxxxx") == q_poly({5, 6, 3, 1}));
    CHECK(phi("dddd") == MultiPoly::theta_pow(4));
    CHECK(phi("xxx").is_zero());
    CHECK(mixed_moment(Word::parse("xxxx")).partition_count == 3);
  }

  TEST_CASE("boundary crossings") {
    const Word w = Word::parse("xdxd");
    CHECK(boundary_crossings(w, {{0, 2}}) == 1);
    const Word v = Word::parse("xxdd");
    CHECK(boundary_crossings(v, {{0, 1}}) == 0);
    // arcs: inside positions 1..3 contain both d; outside has none
    const Word u = Word::parse("xddx");
    CHECK(boundary_crossings(u, {{0, 3}}) == 0);
  }

  TEST_CASE("word sums") {
    CHECK(word_sum_moment(1) == MultiPoly::theta_pow(1));
    CHECK(word_sum_moment(2) == MultiPoly(1) + MultiPoly::theta_pow(2));
    const MultiPoly want = q_poly({2, 1}) + MultiPoly::theta_pow(2).scaled(4) +
                           poly({{{0, 1, 2}, 2}}) + MultiPoly::theta_pow(4);
    CHECK(word_sum_moment(4) == want);
    CHECK_THROWS_AS(word_sum_moment(11), dssyk::DomainError);
  }

  TEST_CASE("cyclic invariance") {
    for (int n = 1; n <= 8; ++n)
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const Word w = word_of(mask, n);
        Word r = w;
        std::rotate(r.letters.begin(), r.letters.begin() + 1, r.letters.end());
        CHECK(mixed_moment(w).value == mixed_moment(r).value);
      }
  }

  TEST_CASE("qt = 0 and qt = 1 specializations") {
    for (int n = 1; n <= 8; ++n)
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const Word w = word_of(mask, n);
        const MultiPoly v = mixed_moment(w).value;
        CHECK(v.specialize(Var::qt, dssyk::qcore::Rational(0)) == boolean_oracle(w));
        // qt = 1: d commutes with x, so the value is theta^#d times a Gaussian moment
        const int nx = w.count(Letter::X);
        const MultiPoly tensor =
            nx % 2 ? MultiPoly() : dssyk::qhermite::rt_moment(nx / 2) * MultiPoly::theta_pow(w.count(Letter::D));
        CHECK(v.specialize(Var::qt, dssyk::qcore::Rational(1)) == tensor);
      }
  }

  TEST_CASE("non-crossing partitions") {
    for (int n = 0; n <= 10; ++n)
      CHECK(noncrossing_partitions(n).size() == dssyk::qcore::catalan(n).get_ui());
    CHECK(noncrossing_partitions(4).size() == 14);
    for (const auto& p : noncrossing_partitions(4)) {
      const bool has_13_24 = std::any_of(p.begin(), p.end(), [](const auto& b) { return b == std::vector<int>{1, 3}; }) &&
                             std::any_of(p.begin(), p.end(), [](const auto& b) { return b == std::vector<int>{2, 4}; });
      CHECK_FALSE(has_13_24);
    }
    CHECK_THROWS_AS(noncrossing_partitions(13), dssyk::DomainError);
  }

  TEST_CASE("free cumulants") {
    // semicircle moments 0, 1, 0, 2, 0, 5 have kappa_2 = 1 and nothing else
    std::vector<MultiPoly> m{0, 1, 0, 2, 0, 5};
    const auto k = free_cumulants(m);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(k[i] == MultiPoly(i == 1 ? 1 : 0));
    // constant variable theta: kappa_1 = theta, higher vanish
    std::vector<MultiPoly> d;
    for (int n = 1; n <= 6; ++n) d.push_back(MultiPoly::theta_pow(n));
    const auto kd = free_cumulants(d);
    CHECK(kd[0] == MultiPoly::theta_pow(1));
    for (std::size_t i = 1; i < kd.size(); ++i) CHECK(kd[i].is_zero());
    for (int n = 1; n <= 10; ++n) CHECK(free_moment_d(n) == MultiPoly::theta_pow(n));
  }
}
