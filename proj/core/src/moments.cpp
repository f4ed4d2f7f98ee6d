#include "dssyk/moments.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>

#include "dssyk/errors.hpp"

namespace dssyk::moments {

using qcore::binomial;
using qcore::factorial;
using qcore::Var;
using qhermite::LinearizationCache;

namespace {

void check_order(int n, const char* who) {
  if (n < 1 || n > kMaxMomentOrder)
    throw DomainError(std::string(who) + ": n must lie in [1, " + std::to_string(kMaxMomentOrder) + "]");
}

void for_each_composition(int total, int max_parts, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> parts;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      f(parts);
      return;
    }
    if (static_cast<int>(parts.size()) == max_parts) return;
    for (int k = 1; k <= left; ++k) {
      parts.push_back(k);
      rec(left - k);
      parts.pop_back();
    }
  };
  if (total > 0) rec(total);
}

// Contribution of one family of intervals with k_i Majorana factors each:
// prod_i sum_{m_i} c_{m_i,k_i} times qt^{sum d_i / 2} <prod H_{d_i}>.
class IntervalSum {
 public:
  const MultiPoly& get(std::vector<int> parts) {
    std::sort(parts.begin(), parts.end());
    auto it = memo_.find(parts);
    if (it != memo_.end()) return it->second;
    MultiPoly sum;
    std::vector<int> degrees(parts.size());
    std::function<void(std::size_t, MultiPoly)> rec = [&](std::size_t i, MultiPoly weight) {
      if (i == parts.size()) {
        int deg_sum = 0;
        for (int d : degrees) deg_sum += d;
        if (deg_sum % 2 != 0) return;
        const MultiPoly& lin = cache_.get(degrees);
        if (lin.is_zero()) return;
        sum += (weight * lin).shifted({0, deg_sum / 2, 0});
        return;
      }
      const HermiteExpansion& e = expansion(parts[i]);
      for (int d = parts[i] % 2; d <= e.degree(); d += 2) {
        degrees[i] = d;
        rec(i + 1, weight * e.coefficient(d));
      }
    };
    rec(0, MultiPoly(1));
    return memo_.emplace(std::move(parts), std::move(sum)).first->second;
  }

 private:
  const HermiteExpansion& expansion(int k) {
    auto it = mono_.find(k);
    if (it == mono_.end()) it = mono_.emplace(k, qhermite::monomial_to_hermite(k)).first;
    return it->second;
  }

  LinearizationCache cache_;
  std::map<int, HermiteExpansion> mono_;
  std::map<std::vector<int>, MultiPoly> memo_;
};

MultiPoly rt(int k) {
  static const std::vector<MultiPoly> table = [] {
    std::vector<MultiPoly> t;
    for (int i = 0; i <= kMaxMomentOrder; ++i) t.push_back(qhermite::rt_moment(i));
    return t;
  }();
  return table.at(static_cast<std::size_t>(k));
}

// E[x^i] for the q-Gaussian: RT(i/2) for even i, 0 otherwise.
MultiPoly gaussian_moment(int i) { return i % 2 == 0 ? rt(i / 2) : MultiPoly(); }

}  // namespace

HermiteExpansion conditional_moment_expansion(int k) {
  if (k < 0) throw DomainError("conditional_moment_expansion: negative order");
  const HermiteExpansion mono = qhermite::monomial_to_hermite(k);
  std::vector<MultiPoly> coeffs;
  for (int d = 0; d <= mono.degree(); ++d) coeffs.push_back(mono.coefficient(d).shifted({0, d, 0}));
  return HermiteExpansion(std::move(coeffs));
}

MultiPoly reduced_moment(int n) {
  check_order(n, "reduced_moment");
  MultiPoly total = MultiPoly::theta_pow(n);
  IntervalSum intervals;
  for (int j = 1; j <= (n - 1) / 2; ++j) {
    const int free = n - 2 * j;
    const Rational pref = qcore::make_rational(n, free);
    for_each_composition(2 * j, std::min(free, 2 * j), [&](const std::vector<int>& parts) {
      const auto l = static_cast<long>(parts.size());
      const Rational weight = pref * Rational(binomial(free, l));
      total += intervals.get(parts).shifted({0, 0, free}).scaled(weight);
    });
  }
  return total;
}

MultiPoly reduced_moment_gf(int n) {
  check_order(n, "reduced_moment_gf");
  // Series coefficients are maps from the sorted multiset of Hermite degrees
  // still to be paired to their polynomial weight.
  using Slot = std::map<std::vector<int>, MultiPoly>;
  std::vector<HermiteExpansion> cond;
  for (int k = 0; k < n; ++k) cond.push_back(conditional_moment_expansion(k));

  const MultiPoly theta = MultiPoly::theta_pow(1);
  auto times_b = [&](const std::vector<Slot>& p) {
    std::vector<Slot> out(static_cast<std::size_t>(n) + 1);
    for (int s = 0; s <= n; ++s) {
      for (const auto& [key, c] : p[static_cast<std::size_t>(s)]) {
        for (int t = 1; s + t <= n; ++t) {
          const HermiteExpansion& e = cond[static_cast<std::size_t>(t) - 1];
          for (int d = 0; d <= e.degree(); ++d) {
            const MultiPoly coef = e.coefficient(d);
            if (coef.is_zero()) continue;
            std::vector<int> k2 = key;
            if (d > 0) k2.insert(std::upper_bound(k2.begin(), k2.end(), d), d);
            out[static_cast<std::size_t>(s + t)][std::move(k2)] += c * coef * theta;
          }
        }
      }
    }
    return out;
  };

  std::vector<Slot> power(static_cast<std::size_t>(n) + 1);
  power[0][{}] = 1;
  Slot log_coeff;  // [z^n] of sum_m B^m / m
  for (int m = 1; m <= n; ++m) {
    power = times_b(power);
    const Rational inv_m = qcore::make_rational(1, m);
    for (const auto& [key, c] : power[static_cast<std::size_t>(n)]) log_coeff[key] += c.scaled(inv_m);
  }

  LinearizationCache cache;
  MultiPoly result;
  for (const auto& [key, c] : log_coeff) {
    if (c.is_zero()) continue;
    const MultiPoly& lin = cache.get(key);
    if (!lin.is_zero()) result += c * lin;
  }
  return result.scaled(Rational(n)).halve_qt_exponents();
}

MultiPoly full_moment(int n, const Rational& r) {
  check_order(n, "full_moment");
  if (!(r > 0 && r <= 1)) throw DomainError("full_moment: r must lie in (0, 1]");
  MultiPoly out = reduced_moment(n).scaled(r);
  if (n % 2 == 0) out += rt(n / 2);
  return out;
}

MultiPoly boolean_moment_c1(int n) {
  check_order(n, "boolean_moment_c1");
  MultiPoly total;
  for (int j = 0; j <= (n - 1) / 2; ++j) {
    const int free = n - 2 * j;
    const Rational pref = qcore::make_rational(n, free);
    // k[i-1] copies of RT(i), with sum_i i k_i = j.
    std::vector<int> k(static_cast<std::size_t>(j), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i > j) {
        if (left != 0) return;
        int used = 0;
        for (int v : k) used += v;
        if (used > free) return;
        mpz_class multinom = factorial(free) / factorial(free - used);
        for (int v : k) multinom /= factorial(v);
        MultiPoly term = MultiPoly::theta_pow(free).scaled(pref * Rational(multinom));
        for (int t = 1; t <= j; ++t) term *= qcore::pow(rt(t), k[static_cast<std::size_t>(t) - 1]);
        total += term;
        return;
      }
      for (int v = 0; v * i <= left; ++v) {
        k[static_cast<std::size_t>(i) - 1] = v;
        rec(i + 1, left - v * i);
      }
      k[static_cast<std::size_t>(i) - 1] = 0;
    };
    rec(1, j);
  }
  return total;
}

MultiPoly qtilde_limit_check(int n, int which) {
  check_order(n, "qtilde_limit_check");
  const MultiPoly m = reduced_moment(n);
  if (which == 0) {
    const MultiPoly lhs = m.specialize(Var::qt, 0);
    const MultiPoly rhs = boolean_moment_c1(n);
    if (lhs != rhs)
      throw Inconsistency("qt = 0 limit of m_" + std::to_string(n) + ": " + lhs.to_string() + " vs Boolean " +
                          rhs.to_string());
    return lhs;
  }
  if (which == 1) {
    MultiPoly shift;
    for (int i = 0; i < n; ++i)
      shift += (gaussian_moment(i) * MultiPoly::theta_pow(n - i)).scaled(Rational(binomial(n, i)));
    const MultiPoly lhs = m.specialize(Var::qt, 1);
    if (lhs != shift)
      throw Inconsistency("qt = 1 limit of m_" + std::to_string(n) + ": " + lhs.to_string() + " vs shift " +
                          shift.to_string());
    return shift;
  }
  throw DomainError("qtilde_limit_check: which must be 0 or 1");
}

MomentTable moment_table(int max_n) {
  check_order(max_n, "moment_table");
  MomentTable t;
  t.max_n = max_n;
  for (int n = 1; n <= max_n; ++n) t.values.push_back(reduced_moment(n));
  return t;
}

std::string to_json(const MomentTable& table) {
  nlohmann::json j;
  j["max_n"] = table.max_n;
  j["params"] = table.params_note;
  nlohmann::json list = nlohmann::json::array();
  for (int n = 1; n <= table.max_n; ++n)
    list.push_back({{"n", n},
                    {"text", table.at(n).to_string()},
                    {"poly", nlohmann::json::parse(qcore::to_json(table.at(n)))}});
  j["moments"] = std::move(list);
  return j.dump(2);
}

BSeries b_series(int order) {
  if (order < 1) throw DomainError("b_series: order must be positive");
  BSeries s;
  s.order = order;
  s.coeffs.emplace_back();
  for (int k = 0; k + 1 <= order; ++k) {
    const HermiteExpansion e = conditional_moment_expansion(k);
    std::vector<MultiPoly> c;
    for (const auto& x : e.coeffs()) c.push_back(x.shifted({0, 0, 1}));
    s.coeffs.emplace_back(std::move(c));
  }
  return s;
}

}  // namespace dssyk::moments
