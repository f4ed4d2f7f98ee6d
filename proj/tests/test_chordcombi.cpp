#include <doctest.h>

#include <algorithm>
#include <set>

#include "dssyk/chordcombi.hpp"
#include "dssyk/errors.hpp"
#include "test_support.hpp"

using namespace dssyk::chord;
using dssyk::qcore::MultiPoly;
using dssyk::qcore::Rational;
using testsupport::q_poly;

namespace {

// Number of involutions of k points (pair-or-singleton partitions).
long telephone(int k) {
  long a = 1, b = 1;
  for (int n = 1; n <= k; ++n) {
    const long c = b + (n - 1) * a;
    a = b;
    b = c;
  }
  return k == 0 ? 1 : b;
}

// Crossings recomputed from block endpoints directly.
int naive_crossings(const SetPartition& p) {
  int cr = 0;
  for (const auto& x : p.blocks)
    for (const auto& y : p.blocks)
      if (x.size() == 2 && y.size() == 2 && x[0] < y[0] && y[0] < x[1] && x[1] < y[1]) ++cr;
  return cr;
}

}  // namespace

TEST_SUITE("chordcombi") {
  TEST_CASE("pair partitions") {
    CHECK(enumerate_pair_partitions(2).size() == 1);
    CHECK(enumerate_pair_partitions(2)[0].cr == 0);
    const auto four = enumerate_pair_partitions(4);
    REQUIRE(four.size() == 3);
    std::multiset<int> crs;
    for (const auto& m : four) crs.insert(m.cr);
    CHECK(crs == std::multiset<int>{0, 0, 1});
    CHECK(enumerate_pair_partitions(6).size() == 15);
    CHECK(crossing_polynomial(enumerate_pair_partitions(6)) == q_poly({5, 6, 3, 1}));
    CHECK(enumerate_pair_partitions(5).empty());
    CHECK(enumerate_pair_partitions(0).size() == 1);
    CHECK_THROWS_AS(enumerate_pair_partitions(18), dssyk::DomainError);
    for (int n = 0; n <= 12; n += 2) {
      const auto all = enumerate_pair_partitions(n);
      CHECK(all.size() == dssyk::qcore::double_factorial_odd(n / 2).get_ui());
      std::set<std::vector<std::vector<int>>> distinct;
      for (const auto& m : all) {
        distinct.insert(m.partition.blocks);
        CHECK(m.cr == naive_crossings(m.partition));
        CHECK(m.partition.ground_size() == n);
      }
      CHECK(distinct.size() == all.size());
    }
  }

  TEST_CASE("P_{1,2} statistics") {
    const MatchingStats s = stats_of(SetPartition{{{1, 3}, {2, 5}, {4}}});
    CHECK(s.cr == 1);
    CHECK(s.sd == 1);
    CHECK(s.singleton_count == 1);
    const auto one = enumerate_p12(1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].singleton_count == 1);
    CHECK(one[0].cr + one[0].sd == 0);
    const auto two = enumerate_p12(2);
    REQUIRE(two.size() == 2);
    for (const auto& m : two) CHECK(m.cr + m.sd == 0);
    for (int k = 0; k <= 10; ++k) CHECK(static_cast<long>(enumerate_p12(k).size()) == telephone(k));
    CHECK_THROWS_AS(enumerate_p12(13), dssyk::DomainError);
  }

  TEST_CASE("normal ordering reproduces the printed powers of T") {
    const auto t2 = normal_order_power(2);
    CHECK(t2.coefficient(2) == MultiPoly(1));
    CHECK(t2.coefficient(1) == MultiPoly());
    CHECK(t2.coefficient(0) == MultiPoly(1));
    const auto t3 = normal_order_power(3);
    CHECK(t3.coefficient(3) == MultiPoly(1));
    CHECK(t3.coefficient(1) == q_poly({2, 1}));
    CHECK(t3.coefficient(0) == MultiPoly());
    const auto t4 = normal_order_power(4);
    CHECK(t4.coefficient(4) == MultiPoly(1));
    CHECK(t4.coefficient(2) == q_poly({3, 2, 1}));
    CHECK(t4.coefficient(0) == q_poly({2, 1}));
  }

  TEST_CASE("T^k as a sum over P_{1,2}(k)") {
    for (int k = 0; k <= 10; ++k) {
      std::vector<MultiPoly> c(static_cast<std::size_t>(k) + 1);
      for (const auto& m : enumerate_p12(k))
        c[static_cast<std::size_t>(m.singleton_count)] += MultiPoly::q_pow(m.cr + m.sd);
      const dssyk::qhermite::HermiteExpansion want(c);
      CHECK(normal_order_power(k) == want);
      CHECK(dssyk::qhermite::monomial_to_hermite(k) == want);
    }
  }

  TEST_CASE("inhomogeneous matching oracle") {
    const int a[] = {1, 1}, b[] = {2, 2}, c[] = {2}, d[] = {1, 1, 1, 1};
    CHECK(inhomogeneous_matching_oracle(a) == MultiPoly(1));
    CHECK(inhomogeneous_matching_oracle(b) == q_poly({1, 1}));
    CHECK(inhomogeneous_matching_oracle(c) == MultiPoly());
    CHECK(inhomogeneous_matching_oracle(d) == q_poly({2, 1}));
    const int big[] = {8, 7};
    CHECK_THROWS_AS(inhomogeneous_matching_oracle(big), dssyk::DomainError);
  }

  TEST_CASE("transfer matrix vacuum moments") {
    CHECK(transfer_vacuum_moment(2, 1) == MultiPoly(1));
    CHECK(transfer_vacuum_moment(4, 2) == q_poly({2, 1}));
    for (int k = 1; k <= 13; k += 2) CHECK(transfer_vacuum_moment(k, 8).is_zero());
    CHECK_THROWS_AS(transfer_vacuum_moment(6, 2), dssyk::DomainError);
    const TransferMatrix t(4);
    CHECK(t.entry(1, 0) == MultiPoly(1));
    CHECK(t.entry(2, 3) == q_poly({1, 1, 1}));
    CHECK(t.entry(0, 2).is_zero());
    for (int k = 0; k <= 7; ++k) {
      const MultiPoly rt = dssyk::qhermite::rt_moment(k);
      CHECK(crossing_polynomial(enumerate_pair_partitions(2 * k)) == rt);
      CHECK(transfer_vacuum_moment(2 * k, k) == rt);
      CHECK(transfer_vacuum_moment(2 * k, k + 3) == rt);
    }
  }

  TEST_CASE("json dump") {
    const std::string s = to_json(enumerate_p12(2));
    CHECK(s.find("\"blocks\"") != std::string::npos);
    CHECK(s.find("\"cr\"") != std::string::npos);
  }
}
