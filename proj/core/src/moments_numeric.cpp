#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dssyk/errors.hpp"
#include "dssyk/moments.hpp"

namespace dssyk::moments {

namespace {

void check_numeric_q(double q, double qt) {
  if (!(q >= 0.0 && q <= qhermite::kMaxNumericQ)) throw DomainError("q outside [0, 0.99]");
  if (!(qt >= 0.0 && qt < 1.0)) throw DomainError("qt outside [0, 1)");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_csv(const MomentTable& table, double q, double qt, double theta) {
  std::ostringstream os;
  os << "n,m_n\n";
  for (int n = 1; n <= table.max_n; ++n) os << n << ',' << format_double(table.at(n).eval(q, qt, theta)) << '\n';
  return os.str();
}

double b_series_value(const BSeries& s, double z, double x0, double q, double qt, double theta) {
  int max_deg = 0;
  for (const auto& c : s.coeffs) max_deg = std::max(max_deg, c.degree());
  const std::vector<double> h = qhermite::hermite_values(max_deg, x0, q);
  const double sqrt_qt = std::sqrt(qt);
  double sum = 0.0;
  double zk = 1.0;
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
    double ck = 0.0;
    for (int d = 0; d <= s.coeffs[k].degree(); ++d)
      ck += s.coeffs[k].coefficient(d).eval(q, sqrt_qt, theta) * h[static_cast<std::size_t>(d)];
    sum += ck * zk;
    zk *= z;
  }
  return sum;
}

double b_continued_fraction(double z, double x0, double q, double qt, int depth, double theta) {
  if (depth < 20) throw DomainError("b_continued_fraction: depth must be at least 20");
  if (!(q >= 0.0 && q < 1.0) || !(qt >= 0.0 && qt <= 1.0)) throw DomainError("b_continued_fraction: q, qt out of range");
  const double sqrt_qt = std::sqrt(qt);
  auto evaluate = [&](int levels) {
    // q^n and [n]_q for the deepest level, walked back up.
    double tail = 0.0;
    for (int n = levels; n >= 1; --n) {
      const double qn = std::pow(q, n);
      const double qint = q == 1.0 ? n : (1.0 - qn) / (1.0 - q);
      const double a = (1.0 - qt * std::pow(q, n - 1)) * qint;
      const double denom = 1.0 - sqrt_qt * qn * x0 * z - tail;
      if (denom == 0.0 || !std::isfinite(denom)) throw NonConvergence("b_continued_fraction: zero denominator");
      tail = a * z * z / denom;
    }
    const double denom = 1.0 - sqrt_qt * x0 * z - tail;
    if (denom == 0.0) throw NonConvergence("b_continued_fraction: zero denominator");
    return theta * z / denom;
  };
  const double v = evaluate(depth);
  const double w = evaluate(2 * depth);
  if (!std::isfinite(v) || std::abs(v - w) > 1e-13 * std::max(1.0, std::abs(w)))
    throw NonConvergence("b_continued_fraction: not settled at depth " + std::to_string(depth));
  return w;
}

double gamma_q(double x, double s, double q) {
  double prod = 1.0;
  double qk = 1.0;
  const int K = qhermite::product_truncation(q) + 1;
  for (int k = 0; k < K && qk > 0.0; ++k) {
    prod /= 1.0 - (1.0 - q) * qk * s * x + (1.0 - q) * qk * qk * s * s;
    qk *= q;
  }
  return prod;
}

double z_n(int n, double beta, double q, double qt) {
  if (n < 1) throw DomainError("z_n: n must be positive");
  check_numeric_q(q, qt);
  const qhermite::QGaussianQuadrature quad(q);
  const double v = quad.integrate([&](double e) { return std::pow(std::exp(-beta * e) * gamma_q(e, qt, q), n); });
  if (!std::isfinite(v)) throw NonConvergence("z_n: quadrature produced a non-finite value");
  return v;
}

double z_one_direct(double beta, double q, double qt) {
  check_numeric_q(q, qt);
  const double edge = qhermite::support_edge(q);
  const int K = qhermite::product_truncation(q);
  auto raw_density = [&](double x) {
    const double c = std::clamp(x / edge, -1.0, 1.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double c2 = 2.0 * c * c - 1.0;
    double prod = 1.0;
    double qk = 1.0;
    for (int k = 1; k <= K; ++k) {
      qk *= q;
      prod *= (1.0 - qk) * (1.0 - 2.0 * qk * c2 + qk * qk);
    }
    return std::sqrt(1.0 - q) / std::numbers::pi * s * prod;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0;
  const double mass = integrator.integrate(raw_density, -edge, edge, 1e-14, &err);
  const double num = integrator.integrate(
      [&](double x) { return std::exp(-beta * x) * gamma_q(x, qt, q) * raw_density(x); }, -edge, edge, 1e-14, &err);
  if (!std::isfinite(num) || !(mass > 0.0)) throw NonConvergence("z_one_direct: quadrature failed");
  return num / mass;
}

double laplace_rt_series(int n, double beta, double q) {
  if (n < 1) throw DomainError("laplace_rt_series: n must be positive");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("laplace_rt_series: q outside [0, 1]");
  const double t = n * beta;
  // Numeric transfer-matrix walk gives RT(k) = <0|T^{2k}|0> for all k at once.
  constexpr int kMaxTerms = 400;
  std::vector<double> v{1.0};
  double sum = 1.0;
  double coef = 1.0;  // t^{2k} / (2k)!
  for (int k = 1; k <= kMaxTerms; ++k) {
    for (int step = 0; step < 2; ++step) {
      std::vector<double> w(v.size() + 1, 0.0);
      for (std::size_t l = 0; l < v.size(); ++l) {
        w[l + 1] += v[l];
        if (l > 0) w[l - 1] += (q == 1.0 ? static_cast<double>(l) : (1.0 - std::pow(q, static_cast<double>(l))) / (1.0 - q)) * v[l];
      }
      v = std::move(w);
    }
    coef *= t * t / ((2.0 * k - 1.0) * (2.0 * k));
    const double term = coef * v[0];
    sum += term;
    if (k > 2 && std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw NonConvergence("laplace_rt_series: series not settled");
}

}  // namespace dssyk::moments
