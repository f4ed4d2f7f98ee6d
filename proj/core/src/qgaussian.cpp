#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "dssyk/errors.hpp"
#include "dssyk/qhermite.hpp"

namespace dssyk::qhermite {

namespace {

constexpr double kProductTail = 1e-16;

void check_q(double q) {
  if (!(q >= 0.0 && q <= kMaxNumericQ))
    throw DomainError("q = " + std::to_string(q) + " outside [0, " + std::to_string(kMaxNumericQ) + "]");
}

// prod_{k=1}^{K} (1 - q^k) |1 - q^k e^{2it}|^2
double theta_product(double t, double q, int K) {
  const double c2 = std::cos(2.0 * t);
  double prod = 1.0;
  double qk = 1.0;
  for (int k = 1; k <= K; ++k) {
    qk *= q;
    prod *= (1.0 - qk) * (1.0 - 2.0 * qk * c2 + qk * qk);
  }
  return prod;
}

}  // namespace

double support_edge(double q) { return 2.0 / std::sqrt(1.0 - q); }

int product_truncation(double q) {
  if (q <= 0.0) return 0;
  return static_cast<int>(std::floor(std::log(kProductTail) / std::log(q))) + 1;
}

std::vector<double> hermite_values(int nmax, double x, double q) {
  std::vector<double> h(static_cast<std::size_t>(std::max(nmax, 0)) + 1);
  h[0] = 1.0;
  if (nmax >= 1) h[1] = x;
  double qn = 1.0;  // q^n
  double qint = 1.0;  // [n]_q
  for (int n = 1; n < nmax; ++n) {
    if (n > 1) {
      qn *= q;
      qint += qn;
    }
    h[static_cast<std::size_t>(n) + 1] = x * h[static_cast<std::size_t>(n)] - qint * h[static_cast<std::size_t>(n) - 1];
  }
  return h;
}

QGaussianQuadrature::QGaussianQuadrature(double q, int panels, int truncation_K)
    : q_(q), truncation_K_(truncation_K > 0 ? truncation_K : product_truncation(q)) {
  check_q(q);
  if (panels < 1) throw DomainError("quadrature needs at least one panel");
  using Rule = boost::math::quadrature::gauss<double, kPointsPerPanel>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();

  const double pi = std::numbers::pi;
  const double scale = support_edge(q);
  nodes_.reserve(static_cast<std::size_t>(panels * kPointsPerPanel));
  weights_.reserve(nodes_.capacity());
  double raw = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = pi * p / panels;
    const double b = pi * (p + 1) / panels;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      for (int sign : {-1, 1}) {
        if (abscissa[i] == 0.0 && sign > 0) continue;
        const double t = mid + sign * half * abscissa[i];
        const double s = std::sin(t);
        const double w = half * weight[i] * (2.0 / pi) * s * s * theta_product(t, q, truncation_K_);
        nodes_.push_back(scale * std::cos(t));
        weights_.push_back(w);
        raw += w;
      }
    }
  }
  raw_mass_ = raw;
  for (double& w : weights_) w /= raw;
}

double QGaussianQuadrature::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
  return s;
}

double QGaussianQuadrature::moment(int k) const {
  return integrate([k](double x) { return std::pow(x, k); });
}

double QGaussianQuadrature::density(double x) const {
  const double edge = support_edge(q_);
  if (std::abs(x) > edge * (1.0 + 1e-12))
    throw DomainError("x = " + std::to_string(x) + " outside the support of nu_q");
  const double c = std::clamp(x / edge, -1.0, 1.0);
  const double t = std::acos(c);
  const double raw = std::sqrt(1.0 - q_) / std::numbers::pi * std::sin(t) * theta_product(t, q_, truncation_K_);
  return raw / raw_mass_;
}

double nu_q_density(double x, double q, int truncation_K) {
  check_q(q);
  return QGaussianQuadrature(q, 64, truncation_K).density(x);
}

double conditional_kernel(double x, double y, double r, double q, int truncation) {
  check_q(q);
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("conditional_kernel: r must lie in [0, 1)");
  const double edge = support_edge(q);
  if (std::abs(x) > edge || std::abs(y) > edge) throw DomainError("conditional_kernel: point outside support");
  if (truncation < 1) throw DomainError("conditional_kernel: truncation must be positive");

  // Orthonormal recurrence: x h_n = sqrt([n+1]) h_{n+1} + sqrt([n]) h_{n-1},
  // h_n = H_n / sqrt([n]_q!), so each term is r^n h_n(x) h_n(y).
  double hx_prev = 0.0, hx = 1.0;
  double hy_prev = 0.0, hy = 1.0;
  double sum = 1.0;
  double rn = 1.0;
  double qn = 1.0;       // q^n
  double qint_n = 0.0;   // [n]_q
  int quiet = 0;
  constexpr int kQuietWindow = 8;
  for (int n = 0; n < truncation; ++n) {
    const double qint_next = qint_n + qn;  // [n+1]_q
    const double s_next = std::sqrt(qint_next);
    const double s_n = std::sqrt(qint_n);
    const double hx_next = (x * hx - s_n * hx_prev) / s_next;
    const double hy_next = (y * hy - s_n * hy_prev) / s_next;
    hx_prev = hx;
    hx = hx_next;
    hy_prev = hy;
    hy = hy_next;
    qn *= q;
    qint_n = qint_next;
    rn *= r;
    const double term = rn * hx * hy;
    sum += term;
    // A single small term can be a sign change of h_n; require a run of them.
    const double bound = rn * (std::abs(hx) + std::abs(hx_prev) + 1.0) * (std::abs(hy) + std::abs(hy_prev) + 1.0);
    quiet = bound < 1e-16 * std::max(1.0, std::abs(sum)) ? quiet + 1 : 0;
    if (quiet >= kQuietWindow) return sum;
  }
  throw NonConvergence("conditional_kernel: series not settled after " + std::to_string(truncation) + " terms");
}

}  // namespace dssyk::qhermite
