#pragma once

// Brute-force chord-diagram oracles and the transfer-matrix realization of
// the q-Gaussian vacuum moments.

#include <span>
#include <string>
#include <vector>

#include "dssyk/qcore.hpp"
#include "dssyk/qhermite.hpp"

namespace dssyk::chord {

using qcore::MultiPoly;

/// Blocks over the ground set 1..n, each sorted, ordered by minimum element.
struct SetPartition {
  std::vector<std::vector<int>> blocks;

  int ground_size() const;
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

struct MatchingStats {
  SetPartition partition;
  int cr = 0;               ///< pairs (a,b), (c,d) with a < c < b < d
  int sd = 0;               ///< (singleton s, pair (a,b)) with a < s < b
  int singleton_count = 0;
};

/// Recomputes cr, sd and the singleton count of a partition with blocks of size <= 2.
MatchingStats stats_of(SetPartition partition);

/// All perfect matchings of 1..n in lexicographic order of the partner of the
/// smallest unmatched point. Odd n gives an empty list. Requires n <= 16.
std::vector<MatchingStats> enumerate_pair_partitions(int n);

/// All partitions of 1..k into singletons and pairs. Requires k <= 12.
std::vector<MatchingStats> enumerate_p12(int k);

/// Sum of q^cr over a list of matchings.
MultiPoly crossing_polynomial(const std::vector<MatchingStats>& list);

/// (x + D)^k brought to normal order x^a D^b with the rule D x -> 1 + q x D.
/// The D-free part gives the Hermite expansion of T^k. Requires k <= 12.
qhermite::HermiteExpansion normal_order_power(int k);

/// Points laid out by class, matchings joining only different classes,
/// weighted by q^crossings. Requires sum(class_sizes) <= 14.
MultiPoly inhomogeneous_matching_oracle(std::span<const int> class_sizes);

/// Truncated chord-number transfer matrix, T|l> = |l+1> + [l]_q |l-1>.
class TransferMatrix {
 public:
  explicit TransferMatrix(int L);

  int truncation() const { return L_; }
  /// Entry (row, col); zero outside the band.
  MultiPoly entry(int row, int col) const;
  /// (0,0) entry of T^k.
  MultiPoly vacuum_moment(int k) const;

 private:
  int L_;
  std::vector<MultiPoly> down_;  ///< down_[l] = [l]_q, the (l-1, l) entry
};

/// <0|T^k|0> with truncation L; throws DomainError if L < ceil(k/2).
MultiPoly transfer_vacuum_moment(int k, int L);

/// Debug dump: [{"blocks": [[1,3],[2]], "cr": 0, "sd": 1, "singletons": 1}, ...].
std::string to_json(const std::vector<MatchingStats>& list);

}  // namespace dssyk::chord
