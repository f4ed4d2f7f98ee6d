#include "dssyk/mixed.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "dssyk/chordcombi.hpp"
#include "dssyk/errors.hpp"

namespace dssyk::mixed {

Word Word::parse(std::string_view text) {
  Word w;
  for (char c : text) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case 'x': w.letters.push_back(Letter::X); break;
      case 'd': w.letters.push_back(Letter::D); break;
      default: throw DomainError("word letters must be x or d, got '" + std::string(1, c) + "'");
    }
  }
  if (w.letters.empty()) throw DomainError("empty word");
  return w;
}

std::string Word::to_string() const {
  std::string s;
  for (Letter l : letters) s += l == Letter::X ? 'x' : 'd';
  return s;
}

int Word::count(Letter l) const { return static_cast<int>(std::count(letters.begin(), letters.end(), l)); }

int boundary_crossings(const Word& w, const std::vector<std::pair<int, int>>& pairs) {
  const int n = static_cast<int>(w.letters.size());
  // prefix[i] = number of D among positions < i
  std::vector<int> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + (w.letters[static_cast<std::size_t>(i)] == Letter::D);
  const int total = prefix.back();
  int bc = 0;
  for (auto [a, b] : pairs) {
    if (a > b) std::swap(a, b);
    const int inside = prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a) + 1];
    if (inside > 0 && total - inside > 0) ++bc;
  }
  return bc;
}

MixedMomentResult mixed_moment(const Word& w) {
  if (w.letters.empty()) throw DomainError("mixed_moment: empty word");
  std::vector<int> xpos;
  for (std::size_t i = 0; i < w.letters.size(); ++i)
    if (w.letters[i] == Letter::X) xpos.push_back(static_cast<int>(i));
  MixedMomentResult res;
  if (xpos.size() % 2 != 0) return res;
  if (xpos.size() > 16) throw DomainError("mixed_moment: more than 16 x letters");
  const int nd = w.count(Letter::D);
  for (const auto& m : chord::enumerate_pair_partitions(static_cast<int>(xpos.size()))) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& b : m.partition.blocks)
      pairs.emplace_back(xpos[static_cast<std::size_t>(b[0]) - 1], xpos[static_cast<std::size_t>(b[1]) - 1]);
    res.value.add_term({m.cr, boundary_crossings(w, pairs), nd}, 1);
    ++res.partition_count;
  }
  return res;
}

MultiPoly word_sum_moment(int n) {
  if (n < 1 || n > 10) throw DomainError("word_sum_moment: n must lie in [1, 10]");
  MultiPoly total;
  Word w;
  w.letters.resize(static_cast<std::size_t>(n));
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int i = 0; i < n; ++i) w.letters[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? Letter::D : Letter::X;
    total += mixed_moment(w).value;
  }
  return total;
}

std::vector<std::vector<std::vector<int>>> noncrossing_partitions(int n) {
  if (n < 0 || n > 12) throw DomainError("noncrossing_partitions: n must lie in [0, 12]");
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> blocks;
  // Adding i to block B crosses iff another block C has an element before
  // some b in B and another element between that b and i.
  auto crosses = [&](std::size_t target, int i) {
    for (int b : blocks[target]) {
      for (std::size_t c = 0; c < blocks.size(); ++c) {
        if (c == target) continue;
        bool before = false, between = false;
        for (int e : blocks[c]) {
          before |= e < b;
          between |= e > b && e < i;
        }
        if (before && between) return true;
      }
    }
    return false;
  };
  std::function<void(int)> rec = [&](int i) {
    if (i > n) {
      out.push_back(blocks);
      return;
    }
    for (std::size_t t = 0; t < blocks.size(); ++t) {
      if (crosses(t, i)) continue;
      blocks[t].push_back(i);
      rec(i + 1);
      blocks[t].pop_back();
    }
    blocks.push_back({i});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(1);
  return out;
}

namespace {

// For each NC(n) partition type (sorted block sizes), how many partitions have it.
std::map<std::vector<int>, long> nc_type_counts(int n) {
  std::map<std::vector<int>, long> counts;
  for (const auto& p : noncrossing_partitions(n)) {
    std::vector<int> sizes;
    for (const auto& b : p) sizes.push_back(static_cast<int>(b.size()));
    std::sort(sizes.begin(), sizes.end());
    ++counts[sizes];
  }
  return counts;
}

}  // namespace

std::vector<MultiPoly> free_cumulants(const std::vector<MultiPoly>& moments) {
  const int n = static_cast<int>(moments.size());
  std::vector<MultiPoly> kappa;
  for (int k = 1; k <= n; ++k) {
    MultiPoly rest;
    for (const auto& [sizes, count] : nc_type_counts(k)) {
      if (sizes.size() == 1) continue;  // the one-block partition carries kappa_k itself
      MultiPoly term(count);
      for (int s : sizes) term *= kappa[static_cast<std::size_t>(s) - 1];
      rest += term;
    }
    kappa.push_back(moments[static_cast<std::size_t>(k) - 1] - rest);
  }
  return kappa;
}

MultiPoly free_moment_d(int n) {
  if (n < 1 || n > 12) throw DomainError("free_moment_d: n must lie in [1, 12]");
  std::vector<MultiPoly> moments;
  for (int k = 1; k <= n; ++k) moments.push_back(MultiPoly::theta_pow(k));
  const std::vector<MultiPoly> kappa = free_cumulants(moments);
  MultiPoly total;
  for (const auto& [sizes, count] : nc_type_counts(n)) {
    MultiPoly term(count);
    for (int s : sizes) term *= kappa[static_cast<std::size_t>(s) - 1];
    total += term;
  }
  return total;
}

}  // namespace dssyk::mixed
