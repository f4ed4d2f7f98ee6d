// Acceptance run: one PASS/FAIL line per criterion.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "dssyk/chordcombi.hpp"
#include "dssyk/edlab.hpp"
#include "dssyk/freeconv.hpp"
#include "dssyk/mixed.hpp"
#include "dssyk/moments.hpp"
#include "dssyk/qhermite.hpp"

using dssyk::qcore::make_rational;
using dssyk::qcore::MultiPoly;
using dssyk::qcore::Rational;
using dssyk::qcore::Var;

namespace {

constexpr std::uint64_t kSeed = 12345;

struct Result {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

int failures = 0;

void run(int id, const char* name, const std::function<void(Result&)>& body) {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.ok = false;
    r.detail << "exception: " << e.what() << "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %2d %s: %s(%.1f s)\n", r.ok ? "PASS" : "FAIL", id, name, r.detail.str().c_str(), secs);
  std::fflush(stdout);
  if (!r.ok) ++failures;
}

MultiPoly qpoly(std::initializer_list<long> c) {
  MultiPoly p;
  int d = 0;
  for (long x : c) p.add_term({d++, 0, 0}, x);
  return p;
}

MultiPoly th(int k) { return MultiPoly::theta_pow(k); }
MultiPoly qt_th(int a, int b) { return MultiPoly::monomial({0, a, b}); }

MultiPoly binomial_shift(int n) {
  MultiPoly s;
  for (int i = 0; i < n; i += 2)
    s += dssyk::qhermite::rt_moment(i / 2).scaled(Rational(dssyk::qcore::binomial(n, i))) * th(n - i);
  return s;
}

void degree_lists(int max_sum, int min_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (!cur.empty()) out.push_back(cur);
  int used = 0;
  for (int d : cur) used += d;
  for (int d = min_part; used + d <= max_sum; ++d) {
    cur.push_back(d);
    degree_lists(max_sum, d, cur, out);
    cur.pop_back();
  }
}

}  // namespace

int main() {
  run(1, "exact identities m_n (closed sum = generating function = word sum - SYK), n <= 8", [](Result& r) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int n = 1; n <= 8; ++n) {
      const MultiPoly a = dssyk::moments::reduced_moment(n);
      const MultiPoly b = dssyk::moments::reduced_moment_gf(n);
      MultiPoly w = dssyk::mixed::word_sum_moment(n);
      if (n % 2 == 0) w -= dssyk::qhermite::rt_moment(n / 2);
      r.require(a == b, "closed sum vs gf at n=" + std::to_string(n));
      r.require(a == w, "closed sum vs word sum at n=" + std::to_string(n));
    }
    r.require(dssyk::moments::reduced_moment(3) == th(3) + th(1).scaled(3), "m3 = theta^3 + 3 theta");
    r.require(dssyk::moments::reduced_moment(4) == th(4) + th(2).scaled(4) + qt_th(1, 2).scaled(2),
              "m4 = theta^4 + (4 + 2 qt) theta^2");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.require(secs < 60.0, "runtime under one minute");
    r.detail << "m4 = " << dssyk::moments::reduced_moment(4).to_string() << " ";
  });

  run(2, "worked mixed-moment examples", [](Result& r) {
    auto phi = [](const char* w) { return dssyk::mixed::mixed_moment(dssyk::mixed::Word::parse(w)).value; };
    r.require(phi("xxxx") == qpoly({2, 1}), "phi(x^4) = 2 + q");
    r.require(phi("xxxxxx") == qpoly({5, 6, 3, 1}), "phi(x^6)");
    r.require(phi("xdxd") == qt_th(1, 2), "phi(xdxd) = qt theta^2");
    r.require(phi("xxdd") == th(2), "phi(x^2 d^2) = theta^2");
    r.require(phi("dddd") == th(4), "phi(d^4) = theta^4");
    r.require(dssyk::mixed::word_sum_moment(4) == qpoly({2, 1}) + th(2).scaled(4) + qt_th(1, 2).scaled(2) + th(4),
              "phi((x+d)^4)");
  });

  run(3, "qt = 0 Boolean formula and qt = 1 binomial shift, n <= 10", [](Result& r) {
    for (int n = 1; n <= 10; ++n) {
      const MultiPoly m = dssyk::moments::reduced_moment(n);
      r.require(m.specialize(Var::qt, 0) == dssyk::moments::boolean_moment_c1(n), "qt=0 at n=" + std::to_string(n));
      r.require(m.specialize(Var::qt, 1) == binomial_shift(n), "qt=1 at n=" + std::to_string(n));
    }
  });

  run(4, "linearization, Riordan-Touchard, transfer matrix and normal-ordering oracles", [](Result& r) {
    std::vector<std::vector<int>> lists;
    std::vector<int> cur;
    degree_lists(10, 1, cur, lists);
    for (const auto& l : lists)
      r.require(dssyk::qhermite::linearization(l) == dssyk::chord::inhomogeneous_matching_oracle(l), "linearization");
    for (int k = 0; k <= 7; ++k) {
      const MultiPoly rt = dssyk::qhermite::rt_moment(k);
      r.require(rt == dssyk::chord::crossing_polynomial(dssyk::chord::enumerate_pair_partitions(2 * k)), "rt vs P2");
      r.require(rt == dssyk::chord::transfer_vacuum_moment(2 * k, k), "rt vs transfer matrix");
    }
    const auto t2 = dssyk::chord::normal_order_power(2);
    const auto t3 = dssyk::chord::normal_order_power(3);
    const auto t4 = dssyk::chord::normal_order_power(4);
    r.require(t2.coefficient(2) == 1 && t2.coefficient(1).is_zero() && t2.coefficient(0) == 1, "T^2");
    r.require(t3.coefficient(3) == 1 && t3.coefficient(1) == qpoly({2, 1}) && t3.coefficient(0).is_zero(), "T^3");
    r.require(t4.coefficient(4) == 1 && t4.coefficient(3).is_zero() && t4.coefficient(2) == qpoly({3, 2, 1}) &&
                  t4.coefficient(1).is_zero() && t4.coefficient(0) == qpoly({2, 1}),
              "T^4");
    for (int k = 0; k <= 10; ++k) {
      std::vector<MultiPoly> c(static_cast<std::size_t>(k) + 1);
      for (const auto& m : dssyk::chord::enumerate_p12(k))
        c[static_cast<std::size_t>(m.singleton_count)] += MultiPoly::q_pow(m.cr + m.sd);
      r.require(dssyk::chord::normal_order_power(k) == dssyk::qhermite::HermiteExpansion(c), "qGp at k=" + std::to_string(k));
    }
    r.detail << lists.size() << " degree lists ";
  });

  run(5, "closed-form c_{m,k} equals the recurrence at q in {0, 1/3, 1/2}, k <= 12", [](Result& r) {
    for (const Rational& q : {Rational(0), make_rational(1, 3), make_rational(1, 2)})
      for (int k = 0; k <= 12; ++k) {
        const auto e = dssyk::qhermite::monomial_to_hermite(k);
        for (int m = 0; 2 * m <= k; ++m)
          r.require(dssyk::qhermite::c_closed_form(m, k, q) == e.coefficient(k - 2 * m).eval(q, Rational(0), Rational(0)),
                    "c_{" + std::to_string(m) + "," + std::to_string(k) + "}");
      }
  });

  run(6, "q-Gaussian quadrature, conditional kernel and continued fraction", [](Result& r) {
    double worst = 0.0;
    for (double q : {0.0, 0.5, 0.9}) {
      const dssyk::qhermite::QGaussianQuadrature quad(q);
      worst = std::max(worst, std::abs(quad.moment(0) - 1.0));
      for (int k = 1; k <= 3; ++k)
        worst = std::max(worst, std::abs(quad.moment(2 * k) - dssyk::qhermite::rt_moment(k).eval(q, 0.0, 0.0)));
    }
    r.require(worst < 1e-7, "moments vs RT");
    const double q = 0.5, rr = 0.6;
    const dssyk::qhermite::QGaussianQuadrature quad(q);
    double kern = 0.0;
    for (double x : {-1.5, 0.0, 0.8, 2.0}) {
      const double v = quad.integrate([&](double y) {
        return dssyk::qhermite::hermite_values(2, y, q)[2] * dssyk::qhermite::conditional_kernel(x, y, rr, q);
      });
      kern = std::max(kern, std::abs(v - rr * rr * dssyk::qhermite::hermite_values(2, x, q)[2]));
    }
    r.require(kern < 1e-6, "kernel eigen relation");
    const auto series = dssyk::moments::b_series(14);
    double cf = 0.0;
    const double pts[][4] = {{0.05, 0.3, 0.5, 0.25}, {0.03, -0.8, 0.2, 0.7}, {0.04, 1.2, 0.8, 0.5}, {0.02, 0.0, 0.0, 0.9}};
    for (const auto& p : pts)
      cf = std::max(cf, std::abs(dssyk::moments::b_continued_fraction(p[0], p[1], p[2], p[3], 40) -
                                 dssyk::moments::b_series_value(series, p[0], p[1], p[2], p[3])));
    r.require(cf < 1e-9, "continued fraction vs B series");
    r.detail << "moment err " << worst << ", kernel err " << kern << ", cf err " << cf << " ";
  });

  run(7, "exact diagonalization suite", [](Result& r) {
    for (int N = 2; N <= 10; N += 2) {
      const int dim = 1 << (N / 2);
      for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
          const auto a = dssyk::ed::majorana(i, N), b = dssyk::ed::majorana(j, N);
          const dssyk::ed::Matrix ac = a * b + b * a;
          const dssyk::ed::Matrix want =
              i == j ? dssyk::ed::Matrix(2.0 * dssyk::ed::Matrix::Identity(dim, dim)) : dssyk::ed::Matrix::Zero(dim, dim);
          r.require((ac - want).cwiseAbs().maxCoeff() == 0.0, "Clifford relation");
        }
    }
    for (auto [N, k] : std::vector<std::pair<int, int>>{{4, 1}, {6, 2}, {8, 3}})
      r.require(dssyk::ed::verify_dc_majorana_expansion(N, k).ok, "D_c expansion");

    dssyk::ed::ModelParams p;
    p.N = 16;
    p.p = 4;
    p.k = 2;
    p.theta = 5.0;
    p.samples = 50;
    p.seed = kSeed;
    const auto spectra = dssyk::ed::sample_spectra(p);
    double m2 = 0.0, m2sq = 0.0;
    for (const auto& s : spectra) {
      double t = 0.0;
      for (double x : s.syk_eigenvalues) t += x * x;
      t /= p.dim();
      m2 += t;
      m2sq += t * t;
    }
    const double S = static_cast<double>(spectra.size());
    m2 /= S;
    const double se = std::sqrt((m2sq / S - m2 * m2) / (S - 1.0));
    r.require(std::abs(m2 - 1.0) <= 3.0 * se, "<tr H_SYK^2> = 1 within 3 sigma");
    r.detail << "tr H^2 = " << m2 << " +- " << se << "; z(n=1..6) =";
    for (const auto& row : dssyk::ed::compare_reduced_moments(spectra, 6)) {
      r.detail << ' ' << std::round(row.zscore * 100.0) / 100.0;
      r.require(std::abs(row.zscore) <= 3.0, "reduced moment n=" + std::to_string(row.n) + " within 3 stderr");
    }
    r.detail << ' ';
  });

  run(8, "phase transition at N=16, p=4, k=2", [](Result& r) {
    dssyk::ed::ModelParams p;
    p.N = 16;
    p.p = 4;
    p.samples = 50;
    p.seed = kSeed;
    const auto cells = dssyk::ed::phase_scan(p, {1.0, 2.0, 3.0, 5.0}, {2});
    r.require(!cells[0].bimodal, "unimodal at theta = 1");
    r.require(cells[3].bimodal, "bimodal at theta = 5");
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) r.require(cells[i].gap <= cells[i + 1].gap, "gap monotone");
    r.detail << "gap(theta=1,2,3,5) =";
    for (const auto& c : cells) r.detail << ' ' << c.gap;
    r.detail << ' ';
  });

  run(9, "free convolution mass, semicircle outlier and Monte Carlo", [](Result& r) {
    double mass = 0.0;
    for (auto [rr, t] : std::vector<std::pair<double, double>>{{0.25, 3.0}, {0.5, 1.0}, {0.1, -2.5}, {1e-4, 2.0}, {0.75, 4.0}})
      mass = std::max(mass, std::abs(dssyk::freeconv::semicircle_plus_atomic(rr, t).measure.total_mass() - 1.0));
    r.require(mass < 1e-4, "mass");
    auto g = [](double e) { return dssyk::freeconv::semicircle_resolvent(e).real(); };
    double out = 0.0;
    for (double t : {1.5, 2.0, 3.0}) {
      const auto e = dssyk::freeconv::outlier_location(t, g, 2.0);
      r.require(e.has_value(), "outlier exists");
      if (e) out = std::max(out, std::abs(*e - (t + 1.0 / t)));
    }
    r.require(out < 1e-6, "outlier at theta + 1/theta");
    const int n = 1024;
    const double rr = 0.25, t = 3.0;
    std::mt19937_64 gen(kSeed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double x = nd(gen) / std::sqrt(static_cast<double>(n));
        if (i == j) x *= std::sqrt(2.0);
        a(i, j) = a(j, i) = x;
      }
    for (int i = 0; i < static_cast<int>(rr * n); ++i) a(i, i) += t;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    const double ks = dssyk::freeconv::ks_distance(dssyk::freeconv::semicircle_plus_atomic(rr, t).measure, ev);
    r.require(ks < 0.05, "KS distance");
    r.detail << "mass err " << mass << ", outlier err " << out << ", KS " << ks << " ";
  });

  run(10, "Z_n at qt = 0 equals the Laplace transform series", [](Result& r) {
    double worst = 0.0;
    for (double q : {0.0, 0.5})
      for (int n = 1; n <= 3; ++n)
        for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0})
          worst = std::max(worst, std::abs(dssyk::moments::z_n(n, beta, q, 0.0) - dssyk::moments::laplace_rt_series(n, beta, q)));
    r.require(worst < 1e-7, "z_n vs series");
    r.detail << "max err " << worst << " ";
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
