#include "dssyk/edlab.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "dssyk/errors.hpp"
#include "dssyk/moments.hpp"

namespace dssyk::ed {

using qcore::binomial;

void ModelParams::validate() const {
  if (N < 2 || N % 2 != 0 || N > kMaxMajoranas)
    throw DomainError("N must be even and lie in [2, " + std::to_string(kMaxMajoranas) + "]");
  if (p < 2 || p % 2 != 0 || p > N) throw DomainError("p must be even and lie in [2, N]");
  if (k < 0 || k > N / 2) throw DomainError("k must lie in [0, N/2]");
  if (samples < 1) throw DomainError("samples must be positive");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Calls f(indices) for every p-subset of 1..N in lexicographic order.
template <typename F>
void for_each_subset(int N, int p, F f) {
  std::vector<int> idx(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    f(idx);
    int i = p - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == N - p + i + 1) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
}

std::vector<double> eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("Hermitian eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

void add_diagonal_block(Matrix& h, int N, int k, double theta) {
  const int ones = 1 << (N / 2 - k);
  for (int i = 0; i < ones; ++i) h(i, i) += theta;
}

// Runs body(i) for i in [0, count) on a few worker threads.
template <typename Body>
void parallel_for(int count, Body body) {
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string params_header(const ModelParams& p) {
  std::ostringstream os;
  os << "# N=" << p.N << " p=" << p.p << " theta=" << fmt(p.theta) << " k=" << p.k << " seed=" << p.seed
     << " samples=" << p.samples << '\n';
  return os.str();
}

}  // namespace

std::vector<double> draw_couplings(const ModelParams& params, std::uint64_t sample_index) {
  params.validate();
  const double count = binomial(params.N, params.p).get_d();
  std::mt19937_64 gen(splitmix64(params.seed ^ splitmix64(sample_index)));
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(count));
  std::vector<double> j(static_cast<std::size_t>(count));
  for (auto& v : j) v = normal(gen);
  return j;
}

Matrix build_h_syk(const ModelParams& params, const std::vector<double>& couplings) {
  params.validate();
  const int N = params.N;
  const int dim = params.dim();
  std::vector<SignedPermutation> psi;
  for (int l = 1; l <= N; ++l) psi.push_back(majorana_op(l, N));
  // i^{p(p-1)/2}
  const int e = (params.p * (params.p - 1) / 2) % 4;
  const cplx prefactor = e == 0 ? cplx(1) : e == 1 ? cplx(0, 1) : e == 2 ? cplx(-1) : cplx(0, -1);

  Matrix h = Matrix::Zero(dim, dim);
  std::size_t a = 0;
  for_each_subset(N, params.p, [&](const std::vector<int>& idx) {
    if (a >= couplings.size()) throw DomainError("build_h_syk: too few couplings");
    SignedPermutation op = psi[static_cast<std::size_t>(idx[0]) - 1];
    for (std::size_t i = 1; i < idx.size(); ++i) op = op * psi[static_cast<std::size_t>(idx[i]) - 1];
    const cplx c = prefactor * couplings[a++];
    for (int t = 0; t < dim; ++t)
      h(op.target[static_cast<std::size_t>(t)], t) += c * op.phase[static_cast<std::size_t>(t)];
  });
  if (a != couplings.size()) throw DomainError("build_h_syk: coupling count does not match C(N,p)");
  return h;
}

std::vector<SpectrumSample> sample_spectra(const ModelParams& params, bool with_syk_reference) {
  params.validate();
  std::vector<SpectrumSample> out(static_cast<std::size_t>(params.samples));
  parallel_for(params.samples, [&](int s) {
    Matrix h = build_h_syk(params, draw_couplings(params, static_cast<std::uint64_t>(s)));
    SpectrumSample& smp = out[static_cast<std::size_t>(s)];
    smp.params = params;
    smp.sample_index = s;
    if (with_syk_reference) smp.syk_eigenvalues = eigenvalues(h);
    add_diagonal_block(h, params.N, params.k, params.theta);
    smp.eigenvalues = eigenvalues(h);
  });
  return out;
}

namespace {

MomentEstimate summarize(const std::vector<std::vector<double>>& per_sample, int max_n) {
  MomentEstimate est;
  const double S = static_cast<double>(per_sample.size());
  for (int n = 0; n <= max_n; ++n) {
    double mean = 0.0;
    for (const auto& v : per_sample) mean += v[static_cast<std::size_t>(n)];
    mean /= S;
    double var = 0.0;
    for (const auto& v : per_sample) var += (v[static_cast<std::size_t>(n)] - mean) * (v[static_cast<std::size_t>(n)] - mean);
    est.mean.push_back(mean);
    est.sem.push_back(per_sample.size() > 1 ? std::sqrt(var / (S - 1.0) / S) : 0.0);
  }
  return est;
}

std::vector<double> power_traces(const std::vector<double>& ev, int max_n) {
  std::vector<double> tr(static_cast<std::size_t>(max_n) + 1, 0.0);
  for (double x : ev) {
    double xn = 1.0;
    for (int n = 0; n <= max_n; ++n) {
      tr[static_cast<std::size_t>(n)] += xn;
      xn *= x;
    }
  }
  for (auto& t : tr) t /= static_cast<double>(ev.size());
  return tr;
}

}  // namespace

MomentEstimate empirical_moments(const std::vector<SpectrumSample>& spectra, int max_n) {
  if (spectra.empty()) throw DomainError("empirical_moments: no samples");
  if (max_n < 0) throw DomainError("empirical_moments: negative order");
  std::vector<std::vector<double>> per;
  for (const auto& s : spectra) per.push_back(power_traces(s.eigenvalues, max_n));
  return summarize(per, max_n);
}

MomentEstimate reduced_empirical_moments(const std::vector<SpectrumSample>& spectra, int max_n) {
  if (spectra.empty()) throw DomainError("reduced_empirical_moments: no samples");
  if (max_n < 0) throw DomainError("reduced_empirical_moments: negative order");
  std::vector<std::vector<double>> per;
  for (const auto& s : spectra) {
    if (s.syk_eigenvalues.size() != s.eigenvalues.size())
      throw DomainError("reduced_empirical_moments: sample lacks its SYK reference spectrum");
    std::vector<double> full = power_traces(s.eigenvalues, max_n);
    const std::vector<double> syk = power_traces(s.syk_eigenvalues, max_n);
    for (int n = 0; n <= max_n; ++n) {
      auto& v = full[static_cast<std::size_t>(n)];
      if (n % 2 == 0) v -= syk[static_cast<std::size_t>(n)];
      v /= s.params.r();
    }
    per.push_back(std::move(full));
  }
  return summarize(per, max_n);
}

Rational qn_finite(int p, int N) {
  if (p < 0 || N < 1 || p > N) throw DomainError("qn_finite: need 0 <= p <= N");
  mpz_class sum = 0;
  for (int c = 0; c <= p; ++c) {
    const mpz_class t = binomial(p, c) * binomial(N - p, p - c);
    sum += c % 2 ? mpz_class(-t) : t;
  }
  Rational q(sum, binomial(N, p));
  q.canonicalize();
  return q;
}

Rational q_j(int j, int p, int N) {
  if (j < 0 || 2 * j > N || p < 0 || p > N) throw DomainError("q_j: need 2j <= N and p <= N");
  mpz_class sum = 0;
  for (int l = 0; l <= std::min(2 * j, p); ++l) {
    const mpz_class t = binomial(2 * j, l) * binomial(N - 2 * j, p - l);
    sum += l % 2 ? mpz_class(-t) : t;
  }
  Rational q(sum, binomial(N, p));
  q.canonicalize();
  return q;
}

Rational qtilde_weight(int p, int N, int k) {
  if (p % 2 != 0) throw DomainError("qtilde_weight: p must be even");
  if (k < 1 || 2 * (k - 1) > N) throw DomainError("qtilde_weight: need k >= 1 and 2(k-1) <= N");
  Rational sum = 0;
  for (int j = 0; j < k; ++j) sum += Rational(binomial(k - 1, j)) * q_j(j, p, N);
  return sum / Rational(mpz_class(1) << (k - 1));
}

Rational qtilde_quoted(int p, int N, int k) {
  if (k == 3) {
    Rational v = (q_j(0, p, N) + 2 * q_j(1, p, N)) / 4;
    v.canonicalize();
    return v;
  }
  return qtilde_weight(p, N, k);
}

Rational model_qtilde(int p, int N, int k) { return k == 0 ? Rational(1) : qtilde_weight(p, N, k); }

std::vector<MomentComparison> compare_reduced_moments(const std::vector<SpectrumSample>& spectra, int max_n) {
  if (spectra.empty()) throw DomainError("compare_reduced_moments: no samples");
  if (max_n < 1 || max_n > moments::kMaxMomentOrder)
    throw DomainError("compare_reduced_moments: max_n must lie in [1, " + std::to_string(moments::kMaxMomentOrder) + "]");
  const ModelParams& par = spectra.front().params;
  const double q = qn_finite(par.p, par.N).get_d();
  const double qt = model_qtilde(par.p, par.N, par.k).get_d();
  const MomentEstimate est = reduced_empirical_moments(spectra, max_n);
  std::vector<MomentComparison> rows;
  for (int n = 1; n <= max_n; ++n) {
    MomentComparison c;
    c.n = n;
    c.analytic = moments::reduced_moment(n).eval(q, qt, par.theta);
    c.empirical = est.mean[static_cast<std::size_t>(n)];
    c.sem = spectra.size() > 1 ? est.sem[static_cast<std::size_t>(n)] : std::numeric_limits<double>::infinity();
    const double floor = 1e-12 * std::max(1.0, std::abs(c.analytic));
    c.zscore = std::isinf(c.sem) ? 0.0 : (c.empirical - c.analytic) / std::sqrt(c.sem * c.sem + floor * floor);
    rows.push_back(c);
  }
  return rows;
}

std::string comparison_csv(const std::vector<MomentComparison>& rows) {
  std::ostringstream os;
  os << "n,analytic,empirical,stderr,zscore\n";
  for (const auto& c : rows)
    os << c.n << ',' << fmt(c.analytic) << ',' << fmt(c.empirical) << ',' << fmt(c.sem) << ',' << fmt(c.zscore) << '\n';
  return os.str();
}

std::vector<PhaseCell> phase_scan(const ModelParams& base, const std::vector<double>& thetas,
                                  const std::vector<int>& ks, double threshold, double trim) {
  base.validate();
  if (!(threshold > 1.0)) throw DomainError("phase_scan: threshold must exceed 1");
  if (!(trim >= 0.0 && trim < 0.5)) throw DomainError("phase_scan: trim must lie in [0, 0.5)");
  for (int k : ks) {
    ModelParams p = base;
    p.k = k;
    p.validate();
  }
  const std::size_t cells = thetas.size() * ks.size();
  // pooled[cell][sample] holds one spectrum; cells are (k major, theta minor).
  std::vector<std::vector<std::vector<double>>> pooled(cells, std::vector<std::vector<double>>(static_cast<std::size_t>(base.samples)));
  parallel_for(base.samples, [&](int s) {
    const Matrix hs = build_h_syk(base, draw_couplings(base, static_cast<std::uint64_t>(s)));
    std::size_t c = 0;
    for (int k : ks)
      for (double theta : thetas) {
        Matrix h = hs;
        add_diagonal_block(h, base.N, k, theta);
        pooled[c++][static_cast<std::size_t>(s)] = eigenvalues(h);
      }
  });

  std::vector<PhaseCell> out;
  std::size_t c = 0;
  for (int k : ks)
    for (double theta : thetas) {
      std::vector<double> all;
      for (const auto& v : pooled[c]) all.insert(all.end(), v.begin(), v.end());
      ++c;
      std::sort(all.begin(), all.end());
      // Coarse-grain the pooled spectrum to block means of `samples` consecutive
      // values; raw pooled spacings of independent draws are close to Poisson.
      const auto stride = static_cast<std::size_t>(base.samples);
      std::vector<double> mean_spec;
      for (std::size_t i = 0; i + stride <= all.size(); i += stride) {
        double s = 0.0;
        for (std::size_t t = i; t < i + stride; ++t) s += all[t];
        mean_spec.push_back(s / static_cast<double>(stride));
      }
      const auto M = mean_spec.size();
      const auto cut = static_cast<std::size_t>(std::floor(trim * static_cast<double>(M)));
      PhaseCell cell;
      cell.theta = theta;
      cell.k = k;
      std::vector<double> gaps;
      for (std::size_t i = cut; i + 1 < M - cut; ++i) {
        const double g = mean_spec[i + 1] - mean_spec[i];
        gaps.push_back(g);
        if (g > cell.max_gap) {
          cell.max_gap = g;
          cell.gap_lower = mean_spec[i];
        }
      }
      if (!gaps.empty()) {
        auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
        std::nth_element(gaps.begin(), mid, gaps.end());
        cell.median_gap = *mid;
      }
      cell.bimodal = cell.median_gap > 0.0 && cell.max_gap > threshold * cell.median_gap;
      cell.gap = cell.bimodal ? cell.max_gap : 0.0;
      out.push_back(cell);
    }
  return out;
}

std::string spectra_csv(const std::vector<SpectrumSample>& spectra) {
  std::ostringstream os;
  if (!spectra.empty()) os << params_header(spectra.front().params);
  os << "sample_index,eigenvalue\n";
  for (const auto& s : spectra)
    for (double e : s.eigenvalues) os << s.sample_index << ',' << fmt(e) << '\n';
  return os.str();
}

std::string histogram_csv(const std::vector<SpectrumSample>& spectra, int bins) {
  if (bins < 1) throw DomainError("histogram_csv: bins must be positive");
  std::vector<double> all;
  for (const auto& s : spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  if (all.empty()) throw DomainError("histogram_csv: no eigenvalues");
  const auto [lo_it, hi_it] = std::minmax_element(all.begin(), all.end());
  const double lo = *lo_it;
  const double width = std::max(*hi_it - lo, 1e-12) / bins;
  std::vector<long> count(static_cast<std::size_t>(bins), 0);
  for (double x : all) {
    auto b = static_cast<long>((x - lo) / width);
    b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
    ++count[static_cast<std::size_t>(b)];
  }
  std::ostringstream os;
  os << params_header(spectra.front().params);
  os << "left_edge,count,density\n";
  for (int b = 0; b < bins; ++b) {
    const long cnt = count[static_cast<std::size_t>(b)];
    os << fmt(lo + b * width) << ',' << cnt << ',' << fmt(static_cast<double>(cnt) / (static_cast<double>(all.size()) * width))
       << '\n';
  }
  return os.str();
}

std::string phase_csv(const std::vector<PhaseCell>& cells) {
  std::ostringstream os;
  os << "theta,k,gap,max_gap,median_gap,gap_lower,bimodal\n";
  for (const auto& c : cells)
    os << fmt(c.theta) << ',' << c.k << ',' << fmt(c.gap) << ',' << fmt(c.max_gap) << ',' << fmt(c.median_gap) << ','
       << fmt(c.gap_lower) << ',' << (c.bimodal ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace dssyk::ed
