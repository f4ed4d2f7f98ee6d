#include "dssyk/freeconv.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include "dssyk/errors.hpp"

namespace dssyk::freeconv {

namespace {

constexpr double kPi = std::numbers::pi;

// Interval [i, i+1] of the grid containing x, or npos when x is off the grid.
std::size_t locate(const std::vector<double>& grid, double x) {
  if (grid.size() < 2 || x < grid.front() || x > grid.back()) return static_cast<std::size_t>(-1);
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == grid.size()) --i;
  return i - 1;
}

template <class F>
double bisect_root(F f, double lo, double hi) {
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  std::uintmax_t it = 200;
  auto r = boost::math::tools::bisect(f, lo, hi, tol, it);
  return 0.5 * (r.first + r.second);
}

std::vector<Atom> clean_atoms(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!std::isfinite(a.location) || !std::isfinite(a.mass) || a.mass < 0.0)
      throw DomainError("atoms need finite locations and nonnegative masses");
    total += a.mass;
    if (a.mass == 0.0) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const Atom& b) { return b.location == a.location; });
    if (it != out.end()) it->mass += a.mass;
    else out.push_back(a);
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("atom masses must sum to 1");
  std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  return out;
}

double f0(const std::vector<Atom>& atoms, double u) {
  double s = 0.0;
  for (const auto& a : atoms) {
    const double d = u - a.location;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    s += a.mass / (d * d);
  }
  return s;
}

}  // namespace

double GridMeasure::atom_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass;
  return s;
}

double GridMeasure::density_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) s += 0.5 * (density[i] + density[i + 1]) * (grid[i + 1] - grid[i]);
  return s;
}

double GridMeasure::support_max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& a : atoms)
    if (a.mass > 0.0) m = std::max(m, a.location);
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (density[i] > 0.0 || (i > 0 && density[i - 1] > 0.0)) {
      m = std::max(m, grid[i]);
      break;
    }
  }
  if (!std::isfinite(m)) throw DomainError("support_max: empty measure");
  return m;
}

double GridMeasure::density_at(double x) const {
  const std::size_t i = locate(grid, x);
  if (i == static_cast<std::size_t>(-1)) return 0.0;
  const double w = grid[i + 1] - grid[i];
  if (w <= 0.0) return std::max(density[i], density[i + 1]);
  const double t = (x - grid[i]) / w;
  return (1.0 - t) * density[i] + t * density[i + 1];
}

double GridMeasure::cdf(double x) const {
  double s = 0.0;
  for (const auto& a : atoms)
    if (a.location <= x) s += a.mass;
  if (grid.size() < 2 || x <= grid.front()) return s;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (x >= grid[i + 1]) {
      s += 0.5 * (density[i] + density[i + 1]) * (grid[i + 1] - grid[i]);
      continue;
    }
    s += 0.5 * (density[i] + density_at(x)) * (x - grid[i]);
    break;
  }
  return s;
}

cplx resolvent(const GridMeasure& mu, cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("resolvent: z must be finite");
  const bool real_axis = z.imag() == 0.0;
  cplx g = 0.0;
  for (const auto& a : mu.atoms) {
    if (a.mass == 0.0) continue;
    if (real_axis && z.real() == a.location) throw DomainError("resolvent: z lies on an atom");
    g += a.mass / (z - a.location);
  }
  if (real_axis) {
    const std::size_t i = locate(mu.grid, z.real());
    if (i != static_cast<std::size_t>(-1)) {
      const double x = z.real();
      const bool at_node = x == mu.grid[i] || x == mu.grid[i + 1];
      const double rho = x == mu.grid[i] ? mu.density[i] : x == mu.grid[i + 1] ? mu.density[i + 1] : 0.0;
      if ((at_node && rho > 0.0) || (!at_node && (mu.density[i] > 0.0 || mu.density[i + 1] > 0.0)))
        throw DomainError("resolvent: real z inside the support of the density");
    }
  }
  // int_a^b (rho_a + s (x - a)) / (z - x) dx = (rho_a + s (z - a)) log((z-a)/(z-b)) - s (b - a)
  for (std::size_t i = 0; i + 1 < mu.grid.size(); ++i) {
    const double a = mu.grid[i], b = mu.grid[i + 1];
    const double ra = mu.density[i], rb = mu.density[i + 1];
    if (b <= a || (ra == 0.0 && rb == 0.0)) continue;
    const double s = (rb - ra) / (b - a);
    const cplx c = ra + s * (z - a);
    if (c != 0.0) g += c * std::log((z - a) / (z - b));
    g -= s * (b - a);
  }
  return g;
}

GridMeasure semicircle_measure(int grid_n) {
  if (grid_n < 3) throw DomainError("semicircle_measure: grid_n >= 3");
  GridMeasure m;
  m.grid.resize(static_cast<std::size_t>(grid_n));
  m.density.resize(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    const double x = -2.0 * std::cos(kPi * i / (grid_n - 1));
    m.grid[static_cast<std::size_t>(i)] = x;
    m.density[static_cast<std::size_t>(i)] =
        (i == 0 || i == grid_n - 1) ? 0.0 : std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * kPi);
  }
  m.grid.front() = -2.0;
  m.grid.back() = 2.0;
  return m;
}

cplx semicircle_resolvent(cplx z) { return 2.0 / (z + std::sqrt(z - 2.0) * std::sqrt(z + 2.0)); }

double subordination_v(const std::vector<Atom>& atoms, double u) {
  if (f0(atoms, u) <= 1.0) return 0.0;
  double total = 0.0;
  for (const auto& a : atoms) total += a.mass;
  auto f = [&](double v) {
    double s = 0.0;
    for (const auto& a : atoms) {
      const double d = u - a.location;
      s += a.mass / (d * d + v * v);
    }
    return s - 1.0;
  };
  const double hi = std::max(1.0, std::sqrt(total)) * 1.0000001;
  if (f(hi) > 0.0) throw NonConvergence("subordination_v: could not bracket the root at u = " + std::to_string(u));
  return bisect_root(f, 0.0, hi);
}

double subordination_psi(const std::vector<Atom>& atoms, double u, double v) {
  double s = u;
  for (const auto& a : atoms) {
    const double d = u - a.location;
    const double den = d * d + v * v;
    if (den == 0.0) throw DomainError("subordination_psi: u on an atom with v = 0");
    s += a.mass * d / den;
  }
  return s;
}

ConvolutionResult semicircle_plus_atoms(const std::vector<Atom>& input, int grid_n, double outlier_mass) {
  if (grid_n < 8) throw DomainError("grid_n must be at least 8");
  if (!(outlier_mass >= 0.0)) throw DomainError("outlier_mass must be nonnegative");
  const std::vector<Atom> atoms = clean_atoms(input);
  auto g = [&](double u) { return f0(atoms, u) - 1.0; };

  // {u : f0(u) > 1} is a union of intervals around atoms; f0 is convex between atoms.
  std::vector<std::pair<double, double>> comps;
  double left = bisect_root(g, atoms.front().location - 1.0, std::nextafter(atoms.front().location, -INFINITY));
  for (std::size_t j = 0; j + 1 < atoms.size(); ++j) {
    const double a = atoms[j].location, b = atoms[j + 1].location;
    auto mn = boost::math::tools::brent_find_minima(g, a, b, 50);
    if (mn.second < 0.0) {
      comps.emplace_back(left, bisect_root(g, std::nextafter(a, INFINITY), mn.first));
      left = bisect_root(g, mn.first, std::nextafter(b, -INFINITY));
    }
  }
  comps.emplace_back(left, bisect_root(g, std::nextafter(atoms.back().location, INFINITY), atoms.back().location + 1.0));

  ConvolutionResult res;
  for (const auto& [ua, ub] : comps) {
    std::vector<double> xs, rho;
    for (int i = 0; i < grid_n; ++i) {
      double u = 0.5 * (ua + ub) - 0.5 * (ub - ua) * std::cos(kPi * i / (grid_n - 1));
      if (i == 0) u = ua;
      if (i == grid_n - 1) u = ub;
      const double v = (i == 0 || i == grid_n - 1) ? 0.0 : subordination_v(atoms, u);
      const double x = subordination_psi(atoms, u, v);
      res.u.push_back(u);
      res.v.push_back(v);
      res.psi.push_back(x);
      xs.push_back(x);
      rho.push_back(v / kPi);
    }
    if (!std::is_sorted(xs.begin(), xs.end())) throw Inconsistency("psi is not monotone on a support component");
    if (!res.measure.grid.empty() && xs.front() < res.measure.grid.back())
      throw Inconsistency("support components overlap");
    double mass = 0.0, first = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double w = 0.5 * (rho[i] + rho[i + 1]) * (xs[i + 1] - xs[i]);
      mass += w;
      first += w * 0.5 * (xs[i] + xs[i + 1]);
    }
    if (mass < outlier_mass) res.outliers.push_back(first / mass);
    else res.support_intervals.emplace_back(xs.front(), xs.back());
    res.measure.grid.insert(res.measure.grid.end(), xs.begin(), xs.end());
    res.measure.density.insert(res.measure.density.end(), rho.begin(), rho.end());
  }
  return res;
}

ConvolutionResult semicircle_plus_atomic(double r, double theta, int grid_n, double outlier_mass) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0, 1)");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  return semicircle_plus_atoms({{0.0, 1.0 - r}, {theta, r}}, grid_n, outlier_mass);
}

std::optional<double> outlier_location(double theta, const std::function<double(double)>& G_b, double e_max) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("outlier_location: theta must be positive");
  const double target = 1.0 / theta;
  if (!(G_b(e_max) > target)) return std::nullopt;
  double width = 1.0;
  int tries = 0;
  while (G_b(e_max + width) > target) {
    width *= 2.0;
    if (++tries > 200) throw NonConvergence("outlier_location: could not bracket the root");
  }
  return bisect_root([&](double e) { return G_b(e) - target; }, e_max, e_max + width);
}

std::optional<double> outlier_location(double theta, const GridMeasure& mu_b) {
  const double e_max = mu_b.support_max();
  const bool atom_on_top = std::any_of(mu_b.atoms.begin(), mu_b.atoms.end(),
                                       [&](const Atom& a) { return a.mass > 0.0 && a.location == e_max; });
  auto G = [&](double e) {
    if (atom_on_top && e == e_max) return std::numeric_limits<double>::infinity();
    return resolvent(mu_b, e).real();
  };
  return outlier_location(theta, G, e_max);
}

GridMeasure resample_uniform(const GridMeasure& mu, int n) {
  if (n < 2) throw DomainError("resample_uniform: n >= 2");
  if (mu.grid.size() < 2) throw DomainError("resample_uniform: measure has no density grid");
  GridMeasure out;
  out.atoms = mu.atoms;
  const double a = mu.grid.front(), b = mu.grid.back();
  for (int i = 0; i < n; ++i) {
    const double x = i == n - 1 ? b : a + (b - a) * i / (n - 1);
    out.grid.push_back(x);
    out.density.push_back(mu.density_at(x));
  }
  return out;
}

double ks_distance(const GridMeasure& mu, std::vector<double> sample) {
  if (sample.empty()) throw DomainError("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = mu.cdf(sample[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  return d;
}

std::string density_csv(const GridMeasure& mu) {
  std::ostringstream os;
  os << std::setprecision(12) << "x,density\n";
  for (std::size_t i = 0; i < mu.grid.size(); ++i) os << mu.grid[i] << ',' << mu.density[i] << '\n';
  return os.str();
}

std::string summary_json(const ConvolutionResult& res) {
  nlohmann::json j;
  j["support"] = nlohmann::json::array();
  for (const auto& [a, b] : res.support_intervals) j["support"].push_back({a, b});
  j["outliers"] = res.outliers;
  j["mass"] = res.measure.total_mass();
  return j.dump();
}

}  // namespace dssyk::freeconv
