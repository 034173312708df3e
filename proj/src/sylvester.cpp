#include "rail/sylvester.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <string>

#include "rail/errors.hpp"
#include "rail/linalg/kernels.hpp"

namespace rail {

namespace {

struct Block {
  std::size_t start;
  std::size_t size;
};

std::vector<Block> blocks_of(const Matrix& t) {
  const auto starts = schur_block_starts(t);
  std::vector<Block> out;
  for (std::size_t b = 0; b < starts.size(); ++b) {
    const std::size_t end = b + 1 < starts.size() ? starts[b + 1] : t.rows();
    out.push_back({starts[b], end - starts[b]});
  }
  return out;
}

void check_disjoint_spectra(const Matrix& ta, const Matrix& tb) {
  const auto ea = schur_eigenvalues(ta);
  const auto eb = schur_eigenvalues(tb);
  for (const auto& la : ea) {
    for (const auto& lb : eb) {
      const double scale = std::max({1.0, std::abs(la), std::abs(lb)});
      if (std::abs(la - lb) <= 1e-12 * scale) {
        throw SingularPencilError("solve_sylvester: coefficients share eigenvalue (" +
                                  std::to_string(la.real()) + ", " + std::to_string(la.imag()) +
                                  ")");
      }
    }
  }
}

// Solves ta_kk * Y - Y * tb_jj = rhs for a p x q block (p, q <= 2) through the
// equivalent (pq) x (pq) Kronecker system with partial pivoting.
void solve_small(const Matrix& ta, Block bk, const Matrix& tb, Block bj, double* rhs_col0,
                 std::size_t ld, std::array<double, 4>& y) {
  const std::size_t p = bk.size;
  const std::size_t q = bj.size;
  const std::size_t m = p * q;
  std::array<double, 16> a{};
  std::array<double, 4> b{};
  // Unknown index u = i + p * j for Y(i, j).
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      const std::size_t row = i + p * j;
      b[row] = rhs_col0[j * ld + i];
      for (std::size_t k = 0; k < p; ++k) a[row * 4 + (k + p * j)] += ta(bk.start + i, bk.start + k);
      for (std::size_t l = 0; l < q; ++l) a[row * 4 + (i + p * l)] -= tb(bj.start + l, bj.start + j);
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::fabs(a[r * 4 + c]) > std::fabs(a[piv * 4 + c])) piv = r;
    if (a[piv * 4 + c] == 0.0) throw SingularPencilError("solve_sylvester: singular diagonal block");
    if (piv != c) {
      for (std::size_t k = 0; k < m; ++k) std::swap(a[c * 4 + k], a[piv * 4 + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = a[r * 4 + c] / a[c * 4 + c];
      for (std::size_t k = c; k < m; ++k) a[r * 4 + k] -= f * a[c * 4 + k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = m; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < m; ++k) s -= a[c * 4 + k] * y[k];
    y[c] = s / a[c * 4 + c];
  }
}

}  // namespace

Matrix solve_sylvester(const SchurFactors& sa, const SchurFactors& sb, const Matrix& rhs) {
  const Matrix& ta = sa.t;
  const Matrix& tb = sb.t;
  const std::size_t n = ta.rows();
  const std::size_t r = tb.rows();
  if (rhs.rows() != n || rhs.cols() != r) {
    throw ArgumentError("solve_sylvester: rhs is " + std::to_string(rhs.rows()) + "x" +
                        std::to_string(rhs.cols()) + ", expected " + std::to_string(n) + "x" +
                        std::to_string(r));
  }
  check_disjoint_spectra(ta, tb);

  // F = Qa^T C Qb, overwritten column block by column block with Y.
  Matrix y = matmul(matmul_tn(sa.q, rhs), sb.q);
  const auto a_blocks = blocks_of(ta);
  const auto b_blocks = blocks_of(tb);
  std::array<double, 4> small{};

  for (const Block bj : b_blocks) {
    // rhs_J = F_J + sum_{I<J} Y_I Tb(I, J)
    for (std::size_t jj = bj.start; jj < bj.start + bj.size; ++jj) {
      auto yj = y.col(jj);
      for (std::size_t ii = 0; ii < bj.start; ++ii) {
        const double c = tb(ii, jj);
        if (c != 0.0) kernels::axpy(c, y.col(ii), yj);
      }
    }
    for (std::size_t kb = a_blocks.size(); kb-- > 0;) {
      const Block bk = a_blocks[kb];
      solve_small(ta, bk, tb, bj, &y(bk.start, bj.start), n, small);
      for (std::size_t j = 0; j < bj.size; ++j) {
        auto yj = y.col(bj.start + j);
        for (std::size_t i = 0; i < bk.size; ++i) yj[bk.start + i] = small[i + bk.size * j];
        // Rows above the block: rhs -= Ta(0:start, K) * Y_KJ
        for (std::size_t i = 0; i < bk.size; ++i) {
          const double v = small[i + bk.size * j];
          if (v != 0.0) {
            kernels::axpy(-v, ta.col(bk.start + i).first(bk.start), yj.first(bk.start));
          }
        }
      }
    }
  }
  return matmul_nt(matmul(sa.q, y), sb.q);
}

Matrix solve_sylvester(const SylvesterProblem& p) {
  if (p.a_big.rows() != p.a_big.cols()) throw ArgumentError("solve_sylvester: a_big not square");
  if (p.b_small.rows() != p.b_small.cols()) {
    throw ArgumentError("solve_sylvester: b_small not square");
  }
  if (p.rhs.rows() != p.a_big.rows() || p.rhs.cols() != p.b_small.rows()) {
    throw ArgumentError("solve_sylvester: rhs shape does not match coefficients");
  }
  const Matrix x = solve_sylvester(real_schur(p.a_big), real_schur(p.b_small), p.rhs);
  assert(sylvester_residual(p.a_big, p.b_small, p.rhs, x) <=
         1e-10 * (p.a_big.frobenius_norm() * x.frobenius_norm() +
                  x.frobenius_norm() * p.b_small.frobenius_norm() + p.rhs.frobenius_norm()));
  return x;
}

double sylvester_residual(const Matrix& a, const Matrix& b, const Matrix& rhs, const Matrix& x) {
  return (matmul(a, x) - matmul(x, b) - rhs).frobenius_norm();
}

}  // namespace rail
