#pragma once

// Mixed moments of words in a standard q-Gaussian x and the constant
// perturbation d, with crossing weights q (x-x) and qt (x-chord against d).

#include <string>
#include <string_view>
#include <vector>

#include "dssyk/qcore.hpp"

namespace dssyk::mixed {

using qcore::MultiPoly;

enum class Letter { X, D };

struct Word {
  std::vector<Letter> letters;

  /// Parses a nonempty string over {x, d} (either case).
  static Word parse(std::string_view text);
  std::string to_string() const;
  int count(Letter l) const;
};

struct MixedMomentResult {
  MultiPoly value;
  long partition_count = 0;  ///< perfect matchings of the X positions
};

/// Number of x-chords {k, l} of the matching `pairs` (positions in the word)
/// whose two cyclic arcs both contain a D letter.
int boundary_crossings(const Word& w, const std::vector<std::pair<int, int>>& pairs);

/// phi(a_1 ... a_n) = sum over perfect matchings of the X positions of
/// qt^bc q^cr theta^{#D}. Zero when #X is odd. Requires #X <= 16.
MixedMomentResult mixed_moment(const Word& w);

/// phi((x + d)^n), the sum of mixed_moment over all 2^n words. 1 <= n <= 10.
MultiPoly word_sum_moment(int n);

/// Non-crossing partitions of 1..n as lists of blocks. 0 <= n <= 12.
std::vector<std::vector<std::vector<int>>> noncrossing_partitions(int n);

/// Free cumulants kappa_1..kappa_n from moments m_1..m_n (moments[i] = m_{i+1})
/// by Moebius inversion over NC(n).
std::vector<MultiPoly> free_cumulants(const std::vector<MultiPoly>& moments);

/// sum_{pi in NC(n)} prod_B kappa_{|B|}(d) with the cumulants of phi(d^k) = theta^k.
MultiPoly free_moment_d(int n);

}  // namespace dssyk::mixed
