#include "dssyk/chordcombi.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>

#include "dssyk/errors.hpp"

namespace dssyk::chord {

using qcore::q_integer;

int SetPartition::ground_size() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  return n;
}

MatchingStats stats_of(SetPartition partition) {
  MatchingStats s;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singles;
  for (const auto& b : partition.blocks) {
    if (b.size() == 1) singles.push_back(b[0]);
    else if (b.size() == 2) pairs.emplace_back(b[0], b[1]);
    else throw DomainError("stats_of: block larger than a pair");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const auto [a, b] = pairs[i];
      const auto [c, d] = pairs[j];
      if (a < c && c < b && b < d) ++s.cr;
    }
  for (int x : singles)
    for (const auto& [a, b] : pairs)
      if (a < x && x < b) ++s.sd;
  s.singleton_count = static_cast<int>(singles.size());
  s.partition = std::move(partition);
  return s;
}

namespace {

// Recursive enumerator over 1..n. `allow_single` admits singleton blocks;
// `compatible(i, j)` filters pairs.
template <typename Compatible>
void enumerate(int n, bool allow_single, Compatible compatible, std::vector<int>& partner,
               std::vector<SetPartition>& out) {
  const auto it = std::find(partner.begin(), partner.end(), 0);
  if (it == partner.end()) {
    SetPartition p;
    for (int i = 1; i <= n; ++i) {
      const int j = partner[static_cast<std::size_t>(i) - 1];
      if (j == i) p.blocks.push_back({i});
      else if (j > i) p.blocks.push_back({i, j});
    }
    out.push_back(std::move(p));
    return;
  }
  const int i = static_cast<int>(it - partner.begin()) + 1;
  if (allow_single) {
    *it = i;
    enumerate(n, allow_single, compatible, partner, out);
    *it = 0;
  }
  for (int j = i + 1; j <= n; ++j) {
    auto& pj = partner[static_cast<std::size_t>(j) - 1];
    if (pj != 0 || !compatible(i, j)) continue;
    *it = j;
    pj = i;
    enumerate(n, allow_single, compatible, partner, out);
    *it = 0;
    pj = 0;
  }
}

std::vector<MatchingStats> with_stats(std::vector<SetPartition> parts) {
  std::vector<MatchingStats> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(stats_of(std::move(p)));
  return out;
}

}  // namespace

std::vector<MatchingStats> enumerate_pair_partitions(int n) {
  if (n < 0 || n > 16) throw DomainError("enumerate_pair_partitions: need 0 <= n <= 16");
  if (n % 2 != 0) return {};
  std::vector<int> partner(static_cast<std::size_t>(n), 0);
  std::vector<SetPartition> parts;
  enumerate(n, false, [](int, int) { return true; }, partner, parts);
  return with_stats(std::move(parts));
}

std::vector<MatchingStats> enumerate_p12(int k) {
  if (k < 0 || k > 12) throw DomainError("enumerate_p12: need 0 <= k <= 12");
  std::vector<int> partner(static_cast<std::size_t>(k), 0);
  std::vector<SetPartition> parts;
  enumerate(k, true, [](int, int) { return true; }, partner, parts);
  return with_stats(std::move(parts));
}

MultiPoly crossing_polynomial(const std::vector<MatchingStats>& list) {
  MultiPoly p;
  for (const auto& m : list) p.add_term({m.cr, 0, 0}, 1);
  return p;
}

qhermite::HermiteExpansion normal_order_power(int k) {
  if (k < 0 || k > 12) throw DomainError("normal_order_power: need 0 <= k <= 12");
  // D^b x in normal order, as a map (a, b') -> coefficient of x^a D^b', a in {0,1}.
  using Form = std::map<std::pair<int, int>, MultiPoly>;
  std::vector<Form> d_pow_x{Form{{{1, 0}, MultiPoly(1)}}};
  for (int b = 1; b < k; ++b) {
    Form next;
    for (const auto& [ab, c] : d_pow_x.back()) {
      const auto [a, bp] = ab;
      if (a == 0) {
        next[{0, bp + 1}] += c;
      } else {
        // D x D^bp -> D^bp + q x D^(bp+1)
        next[{0, bp}] += c;
        next[{1, bp + 1}] += c * MultiPoly::q_pow(1);
      }
    }
    d_pow_x.push_back(std::move(next));
  }

  Form word{{{0, 0}, MultiPoly(1)}};
  for (int step = 0; step < k; ++step) {
    Form next;
    for (const auto& [ab, c] : word) {
      const auto [a, b] = ab;
      next[{a, b + 1}] += c;  // right factor D
      for (const auto& [ab2, c2] : d_pow_x[static_cast<std::size_t>(b)])  // right factor x
        next[{a + ab2.first, ab2.second}] += c * c2;
    }
    std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
    word = std::move(next);
  }

  std::vector<MultiPoly> coeffs(static_cast<std::size_t>(k) + 1);
  for (const auto& [ab, c] : word)
    if (ab.second == 0) coeffs[static_cast<std::size_t>(ab.first)] += c;
  return qhermite::HermiteExpansion(std::move(coeffs));
}

MultiPoly inhomogeneous_matching_oracle(std::span<const int> class_sizes) {
  std::vector<int> cls;
  for (std::size_t c = 0; c < class_sizes.size(); ++c) {
    if (class_sizes[c] < 0) throw DomainError("inhomogeneous_matching_oracle: negative class size");
    cls.insert(cls.end(), static_cast<std::size_t>(class_sizes[c]), static_cast<int>(c));
  }
  const int n = static_cast<int>(cls.size());
  if (n > 14) throw DomainError("inhomogeneous_matching_oracle: more than 14 points");
  if (n % 2 != 0) return {};
  std::vector<int> partner(static_cast<std::size_t>(n), 0);
  std::vector<SetPartition> parts;
  enumerate(
      n, false,
      [&](int i, int j) { return cls[static_cast<std::size_t>(i) - 1] != cls[static_cast<std::size_t>(j) - 1]; },
      partner, parts);
  return crossing_polynomial(with_stats(std::move(parts)));
}

TransferMatrix::TransferMatrix(int L) : L_(L) {
  if (L < 0) throw DomainError("TransferMatrix: negative truncation");
  for (int l = 0; l <= L; ++l) down_.push_back(q_integer(l));
}

MultiPoly TransferMatrix::entry(int row, int col) const {
  if (row < 0 || col < 0 || row > L_ || col > L_) throw DomainError("TransferMatrix: index out of range");
  if (row == col + 1) return 1;
  if (row + 1 == col) return down_[static_cast<std::size_t>(col)];
  return {};
}

MultiPoly TransferMatrix::vacuum_moment(int k) const {
  if (k < 0) throw DomainError("vacuum_moment: negative power");
  const auto dim = static_cast<std::size_t>(L_) + 1;
  std::vector<MultiPoly> v(dim);
  v[0] = 1;
  for (int step = 0; step < k; ++step) {
    std::vector<MultiPoly> w(dim);
    for (std::size_t l = 0; l < dim; ++l) {
      if (v[l].is_zero()) continue;
      if (l + 1 < dim) w[l + 1] += v[l];
      if (l > 0) w[l - 1] += down_[l] * v[l];
    }
    v = std::move(w);
  }
  return v[0];
}

MultiPoly transfer_vacuum_moment(int k, int L) {
  if (k < 0) throw DomainError("transfer_vacuum_moment: negative power");
  if (L < (k + 1) / 2)
    throw DomainError("transfer_vacuum_moment: truncation " + std::to_string(L) + " below ceil(k/2) for k = " +
                      std::to_string(k));
  return TransferMatrix(L).vacuum_moment(k);
}

std::string to_json(const std::vector<MatchingStats>& list) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : list)
    arr.push_back({{"blocks", m.partition.blocks}, {"cr", m.cr}, {"sd", m.sd}, {"singletons", m.singleton_count}});
  return arr.dump();
}

}  // namespace dssyk::chord
