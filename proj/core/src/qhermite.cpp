#include "dssyk/qhermite.hpp"

#include <algorithm>
#include <numeric>

#include "dssyk/chordcombi.hpp"
#include "dssyk/errors.hpp"

namespace dssyk::qhermite {

using qcore::q_binomial;
using qcore::q_factorial;
using qcore::q_integer;

HermiteExpansion::HermiteExpansion(std::vector<MultiPoly> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

MultiPoly HermiteExpansion::coefficient(int d) const {
  if (d < 0 || d > degree()) return {};
  return coeffs_[static_cast<std::size_t>(d)];
}

std::vector<MultiPoly> hermite_in_x(int n) {
  if (n < 0) throw DomainError("hermite_in_x: negative degree");
  std::vector<MultiPoly> prev;        // H_{j-1}
  std::vector<MultiPoly> cur{1};      // H_j
  for (int j = 0; j < n; ++j) {
    // H_{j+1} = x H_j - [j]_q H_{j-1}
    std::vector<MultiPoly> next(cur.size() + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = cur[i];
    const MultiPoly qj = q_integer(j);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= qj * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

HermiteExpansion monomial_to_hermite(int k) {
  if (k < 0) throw DomainError("monomial_to_hermite: negative power");
  std::vector<MultiPoly> e{1};
  for (int step = 0; step < k; ++step) {
    std::vector<MultiPoly> next(e.size() + 1);
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j].is_zero()) continue;
      next[j + 1] += e[j];
      if (j > 0) next[j - 1] += q_integer(static_cast<int>(j)) * e[j];
    }
    e = std::move(next);
  }
  return HermiteExpansion(std::move(e));
}

Rational c_closed_form(int m, int n, const Rational& q) {
  if (m < 0 || n < 0 || 2 * m > n) throw DomainError("c_closed_form: need 0 <= 2m <= n");
  if (q == 1) throw DomainError("c_closed_form: q = 1 is singular in the closed form");
  Rational sum = 0;
  for (int j = 0; j <= m; ++j) {
    Rational qpow = 1;
    for (int i = 0; i < j + j * (j - 1) / 2; ++i) qpow *= q;
    Rational term = qpow * Rational(n - 2 * m + 2 * j + 1, n + 1);
    term.canonicalize();
    term *= Rational(qcore::binomial(n + 1, m - j));
    const MultiPoly gb = q_binomial(n - 2 * m + j, j);
    term *= gb.eval(q, Rational(0), Rational(0));
    if (j % 2 == 1) term = -term;
    sum += term;
  }
  Rational denom = 1;
  for (int i = 0; i < m; ++i) denom *= (1 - q);
  return sum / denom;
}

namespace {

class LinearizationSum {
 public:
  explicit LinearizationSum(std::vector<int> degrees) : deg_(std::move(degrees)) {
    const int l = static_cast<int>(deg_.size());
    const int dmax = deg_.empty() ? 0 : *std::max_element(deg_.begin(), deg_.end());
    qfact_.reserve(static_cast<std::size_t>(dmax) + 1);
    for (int n = 0; n <= dmax; ++n) qfact_.push_back(q_factorial(n));
    qbin_.resize(static_cast<std::size_t>(dmax) + 1);
    for (int n = 0; n <= dmax; ++n)
      for (int k = 0; k <= n; ++k) qbin_[static_cast<std::size_t>(n)].push_back(q_binomial(n, k));
    mat_.assign(static_cast<std::size_t>(l * l), 0);
    rem_ = deg_;
  }

  MultiPoly run() {
    total_ = MultiPoly();
    fill(0, 1);
    return total_;
  }

 private:
  int& at(int i, int j) { return mat_[static_cast<std::size_t>(i * size() + j)]; }
  int size() const { return static_cast<int>(deg_.size()); }

  void fill(int i, int j) {
    const int l = size();
    if (i == l) {
      leaf();
      return;
    }
    if (j == l) {
      if (rem_[static_cast<std::size_t>(i)] != 0) return;
      fill(i + 1, i + 2);
      return;
    }
    auto& ri = rem_[static_cast<std::size_t>(i)];
    auto& rj = rem_[static_cast<std::size_t>(j)];
    // Capacity left in later columns bounds how little we may put here.
    int later = 0;
    for (int t = j + 1; t < l; ++t) later += rem_[static_cast<std::size_t>(t)];
    const int lo = std::max(0, ri - later);
    const int hi = std::min(ri, rj);
    for (int v = lo; v <= hi; ++v) {
      at(i, j) = v;
      at(j, i) = v;
      ri -= v;
      rj -= v;
      fill(i, j + 1);
      ri += v;
      rj += v;
    }
    at(i, j) = 0;
    at(j, i) = 0;
  }

  void leaf() {
    const int l = size();
    MultiPoly w = 1;
    for (int i = 0; i < l; ++i) {
      int remaining = deg_[static_cast<std::size_t>(i)];
      for (int j = 0; j < l; ++j) {
        const int v = at(i, j);
        if (v == 0) continue;
        w *= qbin_[static_cast<std::size_t>(remaining)][static_cast<std::size_t>(v)];
        remaining -= v;
      }
    }
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j)
        if (at(i, j) > 1) w *= qfact_[static_cast<std::size_t>(at(i, j))];
    long b = 0;
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j)
        for (int m = j + 1; m < l; ++m)
          for (int p = m + 1; p < l; ++p) b += static_cast<long>(at(i, m)) * at(j, p);
    total_ += w.shifted({static_cast<int>(b), 0, 0});
  }

  std::vector<int> deg_;
  std::vector<int> rem_;
  std::vector<int> mat_;
  std::vector<MultiPoly> qfact_;
  std::vector<std::vector<MultiPoly>> qbin_;
  MultiPoly total_;
};

}  // namespace

MultiPoly linearization(std::span<const int> degrees) {
  std::vector<int> deg;
  int sum = 0;
  for (int d : degrees) {
    if (d < 0) throw DomainError("linearization: negative degree");
    if (d > 0) deg.push_back(d);
    sum += d;
  }
  if (sum % 2 != 0) return {};
  if (deg.empty()) return 1;
  return LinearizationSum(std::move(deg)).run();
}

const MultiPoly& LinearizationCache::get(std::vector<int> degrees) {
  std::erase(degrees, 0);
  std::sort(degrees.begin(), degrees.end());
  auto it = table_.find(degrees);
  if (it != table_.end()) return it->second;
  MultiPoly value = linearization(degrees);
  return table_.emplace(std::move(degrees), std::move(value)).first->second;
}

MultiPoly rt_moment(int k) {
  if (k < 0) throw DomainError("rt_moment: negative order");
  return chord::transfer_vacuum_moment(2 * k, k);
}

}  // namespace dssyk::qhermite
