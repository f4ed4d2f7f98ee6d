#pragma once

// Finite-N experiments: Majorana operators, SYK Hamiltonian sampling plus the
// constant diagonal block D_c, spectra, empirical moments and the finite-N
// substitutes for q and qt.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dssyk/qcore.hpp"

namespace dssyk::ed {

using qcore::Rational;
using Matrix = Eigen::MatrixXcd;
using cplx = std::complex<double>;

inline constexpr int kMaxMajoranas = 24;  ///< dimension 2^12

struct ModelParams {
  int N = 16;       ///< Majorana count, even
  int p = 4;        ///< interaction degree, even
  double theta = 0.0;
  int k = 0;        ///< D_c has 2^(N/2-k) ones, r = 2^-k
  std::uint64_t seed = 1;
  int samples = 1;

  /// Throws DomainError when a field violates its range.
  void validate() const;
  int dim() const { return 1 << (N / 2); }
  double r() const { return 1.0 / static_cast<double>(1 << k); }
};

/// Operator of the form |t> -> phase[t] |target[t]>, i.e. a Pauli string up
/// to a phase. Products of Majoranas stay in this class.
struct SignedPermutation {
  std::vector<std::uint32_t> target;
  std::vector<cplx> phase;

  static SignedPermutation identity(int dim);
  /// this * o
  SignedPermutation operator*(const SignedPermutation& o) const;
  SignedPermutation scaled(cplx c) const;
  Matrix dense() const;
};

/// psi_l for l = 1..N as a signed permutation. Jordan-Wigner strings in a
/// relabelled basis where the chirality is sigma_3 on the first tensor factor
/// and -i psi_{N-2a-1} psi_{N-2a} is sigma_3 on factor a + 2.
SignedPermutation majorana_op(int l, int N);
Matrix majorana(int l, int N);

/// (-i)^{m/2} psi_1 ... psi_m for even m.
SignedPermutation chirality_op(int m, int N);

/// diag(1, ..., 1, 0, ..., 0) with 2^(N/2-k) ones.
Matrix build_dc(int N, int k);

struct DcCheck {
  bool ok = false;
  double max_abs_diff = 0.0;
  std::string message;
};

/// Builds the Majorana-sum form of D_c (general formula, and for k <= 3 the
/// three expanded displays) and compares entrywise with build_dc. N <= 10.
DcCheck verify_dc_majorana_expansion(int N, int k);

/// Couplings J_alpha ~ N(0, 1/C(N,p)) for one sample, in lexicographic order
/// of the index sets. The stream depends only on (seed, sample_index).
std::vector<double> draw_couplings(const ModelParams& params, std::uint64_t sample_index);

/// sum_alpha i^{p(p-1)/2} J_alpha psi_{i1} ... psi_{ip}.
Matrix build_h_syk(const ModelParams& params, const std::vector<double>& couplings);

struct SpectrumSample {
  std::vector<double> eigenvalues;      ///< H_SYK + theta D_c, ascending
  std::vector<double> syk_eigenvalues;  ///< H_SYK alone with the same couplings
  ModelParams params;
  int sample_index = 0;
};

/// One dense Hermitian eigensolve per sample (two with the SYK reference).
/// Throws NonConvergence if the eigensolver fails on any sample.
std::vector<SpectrumSample> sample_spectra(const ModelParams& params, bool with_syk_reference = true);

struct MomentEstimate {
  std::vector<double> mean;    ///< index n = 0..max_n
  std::vector<double> sem;     ///< standard error of the mean, 0 for one sample
};

/// Mean over samples of sum(lambda^n) / 2^{N/2}.
MomentEstimate empirical_moments(const std::vector<SpectrumSample>& spectra, int max_n);

/// Per-sample (tr H^n - [n even] tr H_SYK^n) / r with matched couplings.
MomentEstimate reduced_empirical_moments(const std::vector<SpectrumSample>& spectra, int max_n);

/// (1/C(N,p)) sum_c (-1)^c C(p,c) C(N-p,p-c).
Rational qn_finite(int p, int N);
/// (1/C(N,p)) sum_l (-1)^l C(2j,l) C(N-2j,p-l).
Rational q_j(int j, int p, int N);
/// qt = 2^{1-k} sum_j C(k-1,j) q_j, the average wall weight of D_c.
Rational qtilde_weight(int p, int N, int k);
/// The k-specific values quoted with the numerical comparison:
/// k = 3 gives (q_0 + 2 q_1)/4, other k agree with qtilde_weight.
Rational qtilde_quoted(int p, int N, int k);

/// qtilde_weight for k >= 1; 1 for k = 0, where D_c is the identity.
Rational model_qtilde(int p, int N, int k);

struct MomentComparison {
  int n = 0;
  double analytic = 0.0;
  double empirical = 0.0;
  double sem = 0.0;
  double zscore = 0.0;
};

/// Reduced empirical moments 1..max_n against reduced_moment evaluated at
/// q = qn_finite and qt = model_qtilde. The z-score divides by
/// sqrt(sem^2 + (1e-12 max(1, |analytic|))^2), which keeps orders that are
/// deterministic up to rounding (n = 1, 2) from producing large scores.
/// A single sample has infinite stderr and zscore 0.
std::vector<MomentComparison> compare_reduced_moments(const std::vector<SpectrumSample>& spectra, int max_n);
/// Columns n, analytic, empirical, stderr, zscore.
std::string comparison_csv(const std::vector<MomentComparison>& rows);

struct PhaseCell {
  double theta = 0.0;
  int k = 0;
  double max_gap = 0.0;     ///< largest spacing of the coarse-grained spectrum
  double median_gap = 0.0;
  double gap = 0.0;         ///< max_gap when bimodal, otherwise 0
  double gap_lower = 0.0;  ///< eigenvalue just below the largest gap
  bool bimodal = false;
};

/// For each (theta, k) pools the spectra of `base.samples` draws (the same
/// couplings for every cell), averages the sorted pooled values in blocks of
/// `samples`, and flags a spacing of that mean spectrum larger than
/// `threshold` times its median spacing. The outer `trim` fraction on each
/// side is left out of the gap search.
std::vector<PhaseCell> phase_scan(const ModelParams& base, const std::vector<double>& thetas,
                                  const std::vector<int>& ks, double threshold = 10.0, double trim = 0.005);

std::string spectra_csv(const std::vector<SpectrumSample>& spectra);
std::string histogram_csv(const std::vector<SpectrumSample>& spectra, int bins);
std::string phase_csv(const std::vector<PhaseCell>& cells);

}  // namespace dssyk::ed
