#pragma once

// q-Hermite machinery in the combinatorial normalization
//   x H_n(x) = H_{n+1}(x) + [n]_q H_{n-1}(x),  H_0 = 1, H_1 = x,
// their basis change from monomials, linearization coefficients, and the
// numeric side: the q-Gaussian orthogonality measure, its quadrature and the
// conditional q-normal (Mehler-type) kernel.

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "dssyk/qcore.hpp"

namespace dssyk::qhermite {

using qcore::MultiPoly;
using qcore::Rational;

/// Finite expansion sum_d coeffs[d] H_d. Trailing zero coefficients are trimmed.
class HermiteExpansion {
 public:
  HermiteExpansion() = default;
  explicit HermiteExpansion(std::vector<MultiPoly> coeffs);

  /// Highest degree with a nonzero coefficient, -1 for the empty expansion.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  MultiPoly coefficient(int d) const;
  const std::vector<MultiPoly>& coeffs() const { return coeffs_; }

  friend bool operator==(const HermiteExpansion&, const HermiteExpansion&) = default;

 private:
  std::vector<MultiPoly> coeffs_;
};

/// Coefficients of x^0..x^n of H_n.
std::vector<MultiPoly> hermite_in_x(int n);

/// x^k = sum_m c_{m,k} H_{k-2m}, built by iterating x H_j = H_{j+1} + [j]_q H_{j-1}.
HermiteExpansion monomial_to_hermite(int k);

/// Closed-form chord count c_{m,n} evaluated at a rational q != 1.
Rational c_closed_form(int m, int n, const Rational& q);

/// Vacuum expectation of prod_j H_{degrees[j]}: a sum over symmetric
/// zero-diagonal matrices with row sums `degrees`, weighted by q-multinomials,
/// q-factorials and q^B with B the crossing count between matrix entries.
MultiPoly linearization(std::span<const int> degrees);

/// Memo table for linearization keyed by the sorted, zero-free degree list.
class LinearizationCache {
 public:
  const MultiPoly& get(std::vector<int> degrees);
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::vector<int>, MultiPoly> table_;
};

/// 2k-th q-Gaussian moment (Riordan-Touchard), via the chord transfer matrix.
MultiPoly rt_moment(int k);

// ---------------------------------------------------------------------------
// Numeric side. Floating point only.

inline constexpr double kMaxNumericQ = 0.99;

/// Right edge 2/sqrt(1-q) of the support of nu_q.
double support_edge(double q);

/// Number of factors K with q^K < 1e-16 used for the infinite products.
int product_truncation(double q);

/// H_0(x)..H_nmax(x) at a numeric point.
std::vector<double> hermite_values(int nmax, double x, double q);

/// Composite Gauss-Legendre rule for integrals against nu_q, built in the
/// angle variable x = 2 cos(t)/sqrt(1-q), t in [0, pi].
class QGaussianQuadrature {
 public:
  static constexpr int kPointsPerPanel = 8;

  /// truncation_K <= 0 selects product_truncation(q).
  explicit QGaussianQuadrature(double q, int panels = 64, int truncation_K = 0);

  double q() const { return q_; }
  int truncation() const { return truncation_K_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Integral of the unnormalized density formula; divides it to give mass 1.
  double raw_mass() const { return raw_mass_; }

  double integrate(const std::function<double(double)>& f) const;
  double moment(int k) const;

  /// Normalized density of nu_q at x.
  double density(double x) const;

 private:
  double q_;
  int truncation_K_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double raw_mass_ = 1.0;
};

/// Density of nu_q with respect to x. Throws DomainError for q outside
/// [0, kMaxNumericQ] or x outside the support.
double nu_q_density(double x, double q, int truncation_K = 0);

/// p_r(x, y) = sum_{n <= truncation} r^n H_n(x) H_n(y) / [n]_q!.
/// Throws NonConvergence if the tail has not settled by `truncation`.
double conditional_kernel(double x, double y, double r, double q, int truncation = 400);

}  // namespace dssyk::qhermite
