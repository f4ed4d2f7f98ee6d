#pragma once

// Free additive convolution of the standard semicircle with a two-atom
// measure via subordination, Cauchy transforms of grid measures and the
// outlier condition theta > 1 / G(E_max).

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dssyk::freeconv {

using cplx = std::complex<double>;

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Atoms plus a density that is linear between consecutive grid points.
struct GridMeasure {
  std::vector<Atom> atoms;
  std::vector<double> grid;     ///< sorted
  std::vector<double> density;  ///< aligned with grid, nonnegative

  double atom_mass() const;
  /// Trapezoid integral of the density.
  double density_mass() const;
  double total_mass() const { return atom_mass() + density_mass(); }
  /// Right end of the support (largest atom or grid point with mass nearby).
  double support_max() const;
  /// Distribution function at x.
  double cdf(double x) const;
  /// Density linearly interpolated at x, zero off the grid.
  double density_at(double x) const;
};

struct ConvolutionResult {
  GridMeasure measure;
  std::vector<std::pair<double, double>> support_intervals;
  /// Centres of support components lighter than the outlier mass cutoff.
  std::vector<double> outliers;
  /// Parametrisation: for grid u, v(u) and psi(u); density(psi) = v / pi.
  std::vector<double> u, v, psi;
};

/// G(z) = int dmu(x) / (z - x). Atoms are summed exactly and the density is
/// integrated exactly as a piecewise-linear function. Throws DomainError for
/// real z on an atom or inside the density's support.
cplx resolvent(const GridMeasure& mu, cplx z);

/// Semicircle of radius 2 (variance 1) on a cosine-spaced grid.
GridMeasure semicircle_measure(int grid_n = 4001);

/// Closed-form Cauchy transform (z - sqrt(z^2 - 4)) / 2 with the branch
/// that decays at infinity.
cplx semicircle_resolvent(cplx z);

/// v(u) solving sum_j m_j / ((u - x_j)^2 + v^2) = 1, or 0 when no positive
/// root exists. Throws NonConvergence if bisection cannot bracket the root.
double subordination_v(const std::vector<Atom>& atoms, double u);

/// psi(u) = u + sum_j m_j (u - x_j) / ((u - x_j)^2 + v^2).
double subordination_psi(const std::vector<Atom>& atoms, double u, double v);

/// mu_a boxplus semicircle for mu_a = (1 - r) delta_0 + r delta_theta, 0 < r < 1.
/// grid_n is the number of u points per support component; components of
/// mass below outlier_mass are reported as outliers.
ConvolutionResult semicircle_plus_atomic(double r, double theta, int grid_n = 2000, double outlier_mass = 1e-3);

/// The same construction for an arbitrary finite atomic mu_a.
ConvolutionResult semicircle_plus_atoms(const std::vector<Atom>& atoms, int grid_n = 2000, double outlier_mass = 1e-3);

/// Solves G_b(E) = 1/theta for E > e_max, where G_b decreases from G_b(e_max).
/// Empty when theta <= 1 / G_b(e_max). Requires theta > 0.
std::optional<double> outlier_location(double theta, const std::function<double(double)>& G_b, double e_max);
std::optional<double> outlier_location(double theta, const GridMeasure& mu_b);

/// Density on a uniform grid of n points across the hull of the support.
GridMeasure resample_uniform(const GridMeasure& mu, int n);

/// sup_x |F_mu(x) - F_emp(x)| for a sample of points.
double ks_distance(const GridMeasure& mu, std::vector<double> sample);

/// "x,density" rows.
std::string density_csv(const GridMeasure& mu);
/// {"support": [[a, b], ...], "outliers": [...], "mass": m}.
std::string summary_json(const ConvolutionResult& res);

}  // namespace dssyk::freeconv
