#include <bit>
#include <sstream>

#include "dssyk/edlab.hpp"
#include "dssyk/errors.hpp"

namespace dssyk::ed {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_N(int N) {
  if (N < 2 || N % 2 != 0 || N > kMaxMajoranas)
    throw DomainError("N must be even and lie in [2, " + std::to_string(kMaxMajoranas) + "], got " + std::to_string(N));
}

// Qubit j = 1..n is the j-th tensor factor, i.e. bit n - j of the index.
// The Jordan-Wigner basis (bits b') and the working basis (bits b) are related by
//   b_1 = b'_1 xor ... xor b'_n,   b_i = b'_{n+2-i} for i >= 2.
struct Relabel {
  int n;
  std::uint32_t bit(int j) const { return 1u << (n - j); }
  bool get(std::uint32_t s, int j) const { return (s & bit(j)) != 0; }

  std::uint32_t old_of_new(std::uint32_t t) const {
    std::uint32_t s = 0;
    bool parity = get(t, 1);
    for (int i = 2; i <= n; ++i) {
      if (get(t, i)) {
        s |= bit(n + 2 - i);
        parity = !parity;
      }
    }
    if (parity) s |= bit(1);
    return s;
  }

  std::uint32_t new_of_old(std::uint32_t s) const {
    std::uint32_t t = std::popcount(s) % 2 ? bit(1) : 0u;
    for (int j = 2; j <= n; ++j)
      if (get(s, j)) t |= bit(n + 2 - j);
    return t;
  }
};

}  // namespace

SignedPermutation SignedPermutation::identity(int dim) {
  SignedPermutation id;
  id.target.resize(static_cast<std::size_t>(dim));
  id.phase.assign(static_cast<std::size_t>(dim), 1.0);
  for (int t = 0; t < dim; ++t) id.target[static_cast<std::size_t>(t)] = static_cast<std::uint32_t>(t);
  return id;
}

SignedPermutation SignedPermutation::operator*(const SignedPermutation& o) const {
  if (o.target.size() != target.size()) throw DomainError("SignedPermutation: dimension mismatch");
  SignedPermutation r;
  r.target.resize(target.size());
  r.phase.resize(target.size());
  for (std::size_t t = 0; t < target.size(); ++t) {
    const std::uint32_t mid = o.target[t];
    r.target[t] = target[mid];
    r.phase[t] = o.phase[t] * phase[mid];
  }
  return r;
}

SignedPermutation SignedPermutation::scaled(cplx c) const {
  SignedPermutation r = *this;
  for (auto& ph : r.phase) ph *= c;
  return r;
}

Matrix SignedPermutation::dense() const {
  const auto dim = static_cast<Eigen::Index>(target.size());
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t t = 0; t < target.size(); ++t)
    m(static_cast<Eigen::Index>(target[t]), static_cast<Eigen::Index>(t)) += phase[t];
  return m;
}

SignedPermutation majorana_op(int l, int N) {
  check_N(N);
  if (l < 1 || l > N) throw DomainError("majorana index out of range");
  const Relabel rel{N / 2};
  const int dim = 1 << rel.n;
  const int j = (l + 1) / 2;
  const bool is_y = l % 2 == 0;
  SignedPermutation op;
  op.target.resize(static_cast<std::size_t>(dim));
  op.phase.resize(static_cast<std::size_t>(dim));
  for (int t = 0; t < dim; ++t) {
    const std::uint32_t s = rel.old_of_new(static_cast<std::uint32_t>(t));
    int string_parity = 0;
    for (int i = 1; i < j; ++i) string_parity ^= rel.get(s, i) ? 1 : 0;
    cplx ph = string_parity ? -1.0 : 1.0;
    if (is_y) ph *= rel.get(s, j) ? -kI : kI;
    op.target[static_cast<std::size_t>(t)] = rel.new_of_old(s ^ rel.bit(j));
    op.phase[static_cast<std::size_t>(t)] = ph;
  }
  return op;
}

Matrix majorana(int l, int N) { return majorana_op(l, N).dense(); }

namespace {

cplx minus_i_pow(int m) {
  static const cplx table[4] = {1.0, -kI, -1.0, kI};
  return table[((m % 4) + 4) % 4];
}

SignedPermutation product(const std::vector<int>& indices, int N) {
  SignedPermutation r = SignedPermutation::identity(1 << (N / 2));
  for (int l : indices) r = r * majorana_op(l, N);
  return r;
}

SignedPermutation pair_op(int a, int N) { return product({a, a + 1}, N); }

}  // namespace

SignedPermutation chirality_op(int m, int N) {
  check_N(N);
  if (m < 0 || m > N || m % 2 != 0) throw DomainError("chirality_op: m must be even and at most N");
  std::vector<int> idx;
  for (int j = 1; j <= m; ++j) idx.push_back(j);
  return product(idx, N).scaled(minus_i_pow(m / 2));
}

Matrix build_dc(int N, int k) {
  check_N(N);
  if (k < 0 || k > N / 2) throw DomainError("build_dc: k must lie in [0, N/2]");
  const int dim = 1 << (N / 2);
  const int ones = 1 << (N / 2 - k);
  Matrix d = Matrix::Zero(dim, dim);
  for (int i = 0; i < ones; ++i) d(i, i) = 1.0;
  return d;
}

namespace {

DcCheck compare(const Matrix& got, const Matrix& want, const std::string& label) {
  DcCheck c;
  c.max_abs_diff = (got - want).cwiseAbs().maxCoeff();
  c.ok = c.max_abs_diff < 1e-12;
  if (!c.ok) {
    for (Eigen::Index i = 0; i < got.rows(); ++i)
      for (Eigen::Index j = 0; j < got.cols(); ++j)
        if (std::abs(got(i, j) - want(i, j)) >= 1e-12) {
          std::ostringstream os;
          os << label << ": first differing entry (" << i << "," << j << ") = " << got(i, j) << ", expected "
             << want(i, j);
          c.message = os.str();
          return c;
        }
  }
  return c;
}

}  // namespace

DcCheck verify_dc_majorana_expansion(int N, int k) {
  check_N(N);
  if (N > 10) throw DomainError("verify_dc_majorana_expansion: N <= 10");
  if (k < 1 || k > N / 2) throw DomainError("verify_dc_majorana_expansion: k must lie in [1, N/2]");
  const int dim = 1 << (N / 2);
  const Matrix want = build_dc(N, k);
  const Matrix one = Matrix::Identity(dim, dim);
  const Matrix gamma_n = chirality_op(N, N).dense();

  // General form: 2^-k sum over subsets {l_1 < ... < l_m} of {0..k-2} of
  // (-i)^m prod psi_{N-2l-1} psi_{N-2l}, times (1 + Gamma_N).
  Matrix sum = Matrix::Zero(dim, dim);
  const int slots = k - 1;
  for (unsigned mask = 0; mask < (1u << slots); ++mask) {
    SignedPermutation term = SignedPermutation::identity(dim);
    int m = 0;
    for (int l = slots - 1; l >= 0; --l) {
      if (!((mask >> l) & 1u)) continue;
      term = term * pair_op(N - 2 * l - 1, N);
      ++m;
    }
    sum += term.scaled(minus_i_pow(m)).dense();
  }
  const Matrix general = sum * (one + gamma_n) / static_cast<double>(1 << k);
  DcCheck res = compare(general, want, "general expansion");
  if (!res.ok || k > 3) return res;

  Matrix display;
  if (k == 1) {
    display = (one + gamma_n) / 2.0;
  } else if (k == 2) {
    display = (one + gamma_n + chirality_op(N - 2, N).dense() + pair_op(N - 1, N).scaled(-kI).dense()) / 4.0;
  } else {
    if (N < 6) return res;
    std::vector<int> tail{N - 1, N};
    for (int j = 1; j <= N - 4; ++j) tail.push_back(j);
    display = (one + gamma_n + chirality_op(N - 2, N).dense() + chirality_op(N - 4, N).dense() +
               pair_op(N - 1, N).scaled(-kI).dense() + pair_op(N - 3, N).scaled(-kI).dense() -
               product({N - 3, N - 2, N - 1, N}, N).dense() +
               product(tail, N).scaled(minus_i_pow((N - 2) / 2)).dense()) /
              8.0;
  }
  DcCheck disp = compare(display, want, "expanded display");
  disp.max_abs_diff = std::max(disp.max_abs_diff, res.max_abs_diff);
  return disp;
}

}  // namespace dssyk::ed
