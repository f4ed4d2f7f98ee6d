#pragma once

// Reduced moments m_n of the SYK Hamiltonian perturbed by a constant diagonal
// block, as exact polynomials in (q, qt, theta), together with the generating
// function B(z, x0), its limits and the Z_n partition function.

#include <string>
#include <vector>

#include "dssyk/qcore.hpp"
#include "dssyk/qhermite.hpp"

namespace dssyk::moments {

using qcore::MultiPoly;
using qcore::Rational;
using qhermite::HermiteExpansion;

inline constexpr int kMaxMomentOrder = 14;

struct MomentTable {
  int max_n = 0;
  std::vector<MultiPoly> values;  ///< values[n - 1] = m_n
  std::string params_note = "symbolic";

  const MultiPoly& at(int n) const { return values.at(static_cast<std::size_t>(n) - 1); }
};

/// Power series of B(z, x0) in z with Hermite-basis coefficients.
/// coeffs[k] multiplies z^k; coeffs[0] is empty and coeffs[k + 1] = theta E_k.
/// The qt exponent counts powers of sqrt(qt).
struct BSeries {
  int order = 0;
  std::vector<HermiteExpansion> coeffs;
};

/// E[x_1^k | x_0] = sum_m c_{m,k} qt^{(k-2m)/2} H_{k-2m}(x_0).
/// The qt exponent of each coefficient stores twice the true power.
HermiteExpansion conditional_moment_expansion(int k);

/// m_n by the closed sum over interval compositions. 1 <= n <= 14.
MultiPoly reduced_moment(int n);

/// m_n = n [z^n] <0| log 1/(1 - B(z, x0)) |0>. 1 <= n <= 14.
MultiPoly reduced_moment_gf(int n);

/// <tr H^n> = r m_n + (pure SYK moment for even n). Requires 0 < r <= 1.
MultiPoly full_moment(int n, const Rational& r);

/// The single-nonzero-entry (c = 1) formula written with Riordan-Touchard
/// moments and multinomial weights. 1 <= n <= 14.
MultiPoly boolean_moment_c1(int n);

/// which = 0: m_n at qt = 0, checked against boolean_moment_c1.
/// which = 1: the binomial shift sum_{i<n} C(n,i) E[x^i] theta^(n-i), checked
/// against m_n at qt = 1. Throws Inconsistency when the routes disagree.
MultiPoly qtilde_limit_check(int n, int which);

MomentTable moment_table(int max_n);
std::string to_json(const MomentTable& table);

/// m_1..m_max at numeric (q, qt, theta) as CSV rows "n,m_n".
std::string to_csv(const MomentTable& table, double q, double qt, double theta);

BSeries b_series(int order);

/// Partial sum of a BSeries at numeric arguments.
double b_series_value(const BSeries& s, double z, double x0, double q, double qt, double theta = 1.0);

/// Continued fraction for B(z, x0) with levels
/// b_n = sqrt(qt) q^n x0 and a_n = (1 - qt q^(n-1)) [n]_q.
/// Throws DomainError for depth < 20 and NonConvergence if doubling the depth
/// moves the value by more than 1e-13 (relative).
double b_continued_fraction(double z, double x0, double q, double qt, int depth, double theta = 1.0);

/// Gamma_q(x, s) = prod_k 1 / (1 - (1-q) q^k s x + (1-q) q^(2k) s^2).
double gamma_q(double x, double s, double q);

/// Z_n = int (e^{-beta E} Gamma_q(E, qt))^n nu_q(dE) on the q-Gaussian quadrature.
double z_n(int n, double beta, double q, double qt);

/// Z_1 by adaptive tanh-sinh quadrature of the density in x; independent of z_n.
double z_one_direct(double beta, double q, double qt);

/// sum_k (n beta)^{2k} / (2k)! RT(k), summed until terms drop below 1e-17.
double laplace_rt_series(int n, double beta, double q);

}  // namespace dssyk::moments
