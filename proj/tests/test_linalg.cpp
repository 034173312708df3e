#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "rail/errors.hpp"
#include "rail/linalg/decompositions.hpp"
#include "test_support.hpp"

namespace {

using rail::Matrix;
using rail::testing::random_matrix;

double max_abs_of(const Matrix& m) { return m.max_abs(); }

// Classical Gram-Schmidt with reorthogonalisation, used as an independent QR oracle.
Matrix gram_schmidt(const Matrix& a) {
  Matrix q(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::vector<double> v(a.col(j).begin(), a.col(j).end());
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double f = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) f += q(i, k) * v[i];
        for (std::size_t i = 0; i < a.rows(); ++i) v[i] -= f * q(i, k);
      }
    }
    double nv = 0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    for (std::size_t i = 0; i < a.rows(); ++i) q(i, j) = v[i] / nv;
  }
  return q;
}

// ---------------------------------------------------------------- QR

TEST(QrReduced, IdentityGivesIdentity) {
  const auto f = rail::qr_reduced(Matrix::identity(3));
  EXPECT_LE(rail::max_abs_diff(f.q, Matrix::identity(3)), 1e-15);
  EXPECT_LE(rail::max_abs_diff(f.r, Matrix::identity(3)), 1e-15);
}

TEST(QrReduced, SingleColumn) {
  const auto f = rail::qr_reduced(Matrix::from_rows({{3}, {4}, {0}}));
  ASSERT_EQ(f.q.cols(), 1u);
  EXPECT_NEAR(std::fabs(f.q(0, 0)), 0.6, 1e-15);
  EXPECT_NEAR(std::fabs(f.q(1, 0)), 0.8, 1e-15);
  EXPECT_NEAR(f.q(2, 0), 0.0, 1e-15);
  EXPECT_NEAR(std::fabs(f.r(0, 0)), 5.0, 1e-14);
}

TEST(QrReduced, RandomTallMatchesGramSchmidt) {
  std::mt19937_64 rng(1);
  const Matrix a = random_matrix(20, 7, rng);
  const auto f = rail::qr_reduced(a);
  ASSERT_EQ(f.q.rows(), 20u);
  ASSERT_EQ(f.q.cols(), 7u);
  ASSERT_EQ(f.r.rows(), 7u);
  EXPECT_LE(rail::orthonormality_defect(f.q), 1e-12 * 20);
  EXPECT_LE(rail::max_abs_diff(rail::matmul(f.q, f.r), a), 1e-12 * max_abs_of(a));
  for (std::size_t j = 0; j < 7; ++j)
    for (std::size_t i = j + 1; i < 7; ++i) EXPECT_EQ(f.r(i, j), 0.0);
  // With diag(R) >= 0 the factorisation is unique for full-rank input.
  const Matrix q_gs = gram_schmidt(a);
  EXPECT_LE(rail::max_abs_diff(f.q, q_gs), 1e-12);
}

TEST(QrReduced, WideInput) {
  std::mt19937_64 rng(2);
  const Matrix a = random_matrix(4, 9, rng);
  const auto f = rail::qr_reduced(a);
  EXPECT_EQ(f.q.cols(), 4u);
  EXPECT_EQ(f.r.rows(), 4u);
  EXPECT_EQ(f.r.cols(), 9u);
  EXPECT_LE(rail::max_abs_diff(rail::matmul(f.q, f.r), a), 1e-13);
}

TEST(QrReduced, RankDeficientStillReconstructs) {
  std::mt19937_64 rng(3);
  const Matrix b = random_matrix(10, 2, rng);
  const Matrix a = rail::hcat({b, b, Matrix(10, 1)});
  const auto f = rail::qr_reduced(a);
  EXPECT_LE(rail::orthonormality_defect(f.q), 1e-12);
  EXPECT_LE(rail::max_abs_diff(rail::matmul(f.q, f.r), a), 1e-13);
}

TEST(QrReduced, IdempotentOnOrthonormalInput) {
  std::mt19937_64 rng(4);
  const Matrix q0 = rail::testing::random_orthonormal(15, 5, rng);
  const auto f = rail::qr_reduced(q0);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_NEAR(std::fabs(f.r(i, j)), i == j ? 1.0 : 0.0, 1e-13);
    }
  }
  const Matrix p0 = rail::matmul_nt(q0, q0);
  const Matrix p1 = rail::matmul_nt(f.q, f.q);
  EXPECT_LE(rail::max_abs_diff(p0, p1), 1e-13);
}

TEST(QrReduced, EmptyInputThrows) {
  EXPECT_THROW(rail::qr_reduced(Matrix(3, 0)), rail::ArgumentError);
  EXPECT_THROW(rail::qr_reduced(Matrix()), rail::ArgumentError);
}

// ---------------------------------------------------------------- SVD

void expect_svd_invariants(const Matrix& a, const rail::SvdFactors& f) {
  const std::size_t k = std::min(a.rows(), a.cols());
  ASSERT_EQ(f.sigma.size(), k);
  ASSERT_EQ(f.u.cols(), k);
  ASSERT_EQ(f.v.cols(), k);
  for (std::size_t i = 0; i + 1 < k; ++i) EXPECT_GE(f.sigma[i], f.sigma[i + 1]);
  for (double s : f.sigma) EXPECT_GE(s, 0.0);
  EXPECT_LE(rail::orthonormality_defect(f.u), 1e-12);
  EXPECT_LE(rail::orthonormality_defect(f.v), 1e-12);
  const Matrix rec = rail::matmul_nt(rail::scale_cols(f.u, f.sigma), f.v);
  const double s1 = k == 0 ? 0.0 : f.sigma[0];
  EXPECT_LE(rail::max_abs_diff(rec, a),
            1e-12 * std::max(s1, 1e-300) * static_cast<double>(std::max(a.rows(), a.cols())));
}

TEST(Svd, Diagonal) {
  const Matrix a = Matrix::from_rows({{3, 0}, {0, 1}});
  const auto f = rail::svd(a);
  EXPECT_NEAR(f.sigma[0], 3.0, 1e-15);
  EXPECT_NEAR(f.sigma[1], 1.0, 1e-15);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(std::fabs(f.u(i, i)), 1.0, 1e-15);
    EXPECT_NEAR(std::fabs(f.v(i, i)), 1.0, 1e-15);
  }
  expect_svd_invariants(a, f);
}

TEST(Svd, RankOneOuterProduct) {
  std::mt19937_64 rng(5);
  const Matrix u = rail::testing::random_orthonormal(6, 1, rng);
  const Matrix v = rail::testing::random_orthonormal(4, 1, rng);
  const Matrix a = rail::matmul_nt(u, v);
  const auto f = rail::svd(a);
  EXPECT_NEAR(f.sigma[0], 1.0, 1e-14);
  for (std::size_t i = 1; i < f.sigma.size(); ++i) EXPECT_NEAR(f.sigma[i], 0.0, 1e-14);
  expect_svd_invariants(a, f);
}

TEST(Svd, RandomMatchesEigenvaluesOfGram) {
  std::mt19937_64 rng(6);
  const Matrix a = random_matrix(8, 5, rng);
  const auto f = rail::svd(a);
  expect_svd_invariants(a, f);
  const Eigen::MatrixXd ea = rail::testing::to_eigen(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ea.transpose() * ea);
  std::vector<double> lambdas(es.eigenvalues().data(), es.eigenvalues().data() + 5);
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(f.sigma[i] * f.sigma[i], lambdas[i], 1e-10 * lambdas[0]);
  }
}

TEST(Svd, WideAndSquareShapes) {
  std::mt19937_64 rng(7);
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{3, 9}, {7, 7}, {1, 5}, {5, 1}}) {
    const Matrix a = random_matrix(m, n, rng);
    expect_svd_invariants(a, rail::svd(a));
  }
}

TEST(Svd, ZeroMatrixHasOrthonormalFactors) {
  const Matrix a(6, 3);
  const auto f = rail::svd(a);
  for (double s : f.sigma) EXPECT_EQ(s, 0.0);
  EXPECT_LE(rail::orthonormality_defect(f.u), 1e-14);
  EXPECT_LE(rail::orthonormality_defect(f.v), 1e-14);
}

TEST(Svd, RankDeficientHasCompletedU) {
  std::mt19937_64 rng(8);
  const Matrix b = random_matrix(12, 3, rng);
  const Matrix c = random_matrix(3, 6, rng);
  const Matrix a = rail::matmul(b, c);
  const auto f = rail::svd(a);
  expect_svd_invariants(a, f);
  for (std::size_t i = 3; i < 6; ++i) EXPECT_LE(f.sigma[i], 1e-13 * f.sigma[0]);
}

TEST(Svd, InvariantUnderPermutations) {
  std::mt19937_64 rng(9);
  const Matrix a = random_matrix(9, 6, rng);
  std::vector<std::size_t> rp(9), cp(6);
  std::iota(rp.begin(), rp.end(), 0);
  std::iota(cp.begin(), cp.end(), 0);
  std::shuffle(rp.begin(), rp.end(), rng);
  std::shuffle(cp.begin(), cp.end(), rng);
  Matrix p(9, 6);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 9; ++i) p(i, j) = a(rp[i], cp[j]);
  const auto s0 = rail::singular_values(a);
  const auto s1 = rail::singular_values(p);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(s0[i], s1[i], 1e-13 * s0[0]);
  const auto f = rail::svd(a);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(f.sigma[i], s0[i], 1e-13 * s0[0]);
}

TEST(Svd, EmptyThrows) { EXPECT_THROW(rail::svd(Matrix()), rail::ArgumentError); }

// ---------------------------------------------------------------- Schur

void expect_schur_invariants(const Matrix& a, const rail::SchurFactors& f) {
  const std::size_t n = a.rows();
  EXPECT_LE(rail::orthonormality_defect(f.q), 1e-12 * static_cast<double>(n));
  const Matrix rec = rail::matmul_nt(rail::matmul(f.q, f.t), f.q);
  EXPECT_LE(rail::max_abs_diff(rec, a), 1e-10 * a.max_abs());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 2; i < n; ++i) EXPECT_EQ(f.t(i, j), 0.0);
  // No two consecutive non-zero subdiagonals, and 2x2 blocks carry complex pairs.
  for (std::size_t i = 0; i + 2 < n; ++i) {
    EXPECT_FALSE(f.t(i + 1, i) != 0.0 && f.t(i + 2, i + 1) != 0.0) << "at " << i;
  }
  for (const auto& ev : rail::schur_eigenvalues(f.t)) (void)ev;
}

TEST(RealSchur, SymmetricIsSpectral) {
  std::mt19937_64 rng(10);
  const Matrix b = random_matrix(4, 4, rng);
  const Matrix a = b + b.transpose();
  const auto f = rail::real_schur(a);
  expect_schur_invariants(a, f);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i)
      if (i != j) { EXPECT_NEAR(f.t(i, j), 0.0, 1e-10); }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rail::testing::to_eigen(a));
  std::vector<double> diag(4), ref(4);
  for (std::size_t i = 0; i < 4; ++i) {
    diag[i] = f.t(i, i);
    ref[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  }
  std::sort(diag.begin(), diag.end());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(diag[i], ref[i], 1e-10);
}

TEST(RealSchur, RotationKeepsComplexPair) {
  const double th = 0.7;
  const Matrix a = Matrix::from_rows({{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}});
  const auto f = rail::real_schur(a);
  expect_schur_invariants(a, f);
  EXPECT_NE(f.t(1, 0), 0.0);
  const auto ev = rail::schur_eigenvalues(f.t);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0].real(), std::cos(th), 1e-14);
  EXPECT_NEAR(std::fabs(ev[0].imag()), std::sin(th), 1e-14);
  EXPECT_NEAR(ev[0].imag(), -ev[1].imag(), 1e-15);
}

// Eigenvalues via the companion matrix of the characteristic polynomial,
// whose coefficients come from the Faddeev-LeVerrier recursion.
std::vector<std::complex<double>> companion_eigenvalues(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  std::vector<double> c(n + 1);
  c[n] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * Eigen::MatrixXd::Identity(n, n);
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

void sort_complex(std::vector<std::complex<double>>& v) {
  std::sort(v.begin(), v.end(), [](auto x, auto y) {
    if (std::fabs(x.real() - y.real()) > 1e-7) return x.real() < y.real();
    return x.imag() < y.imag();
  });
}

TEST(RealSchur, RandomMatchesCompanionOracle) {
  std::mt19937_64 rng(11);
  const Matrix a = random_matrix(10, 10, rng);
  const auto f = rail::real_schur(a);
  expect_schur_invariants(a, f);
  auto ev = rail::schur_eigenvalues(f.t);
  auto ref = companion_eigenvalues(rail::testing::to_eigen(a));
  ASSERT_EQ(ev.size(), ref.size());
  sort_complex(ev);
  sort_complex(ref);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_NEAR(ev[i].real(), ref[i].real(), 1e-8) << i;
    EXPECT_NEAR(ev[i].imag(), ref[i].imag(), 1e-8) << i;
  }
}

TEST(RealSchur, ManyRandomSizes) {
  std::mt19937_64 rng(12);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u, 40u, 90u}) {
    const Matrix a = random_matrix(n, n, rng);
    expect_schur_invariants(a, rail::real_schur(a));
  }
}

TEST(RealSchur, DiffusionLikeOperatorAndShift) {
  // I - h * (second-difference matrix) is symmetric positive definite.
  const std::size_t n = 64;
  Matrix a = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) += 2.0 * 50.0;
    a(i, (i + 1) % n) -= 50.0;
    a((i + 1) % n, i) -= 50.0;
  }
  expect_schur_invariants(a, rail::real_schur(a));
}

TEST(RealSchur, TriangularAndZeroInputs) {
  const Matrix up = Matrix::from_rows({{1, 2, 3}, {0, 4, 5}, {0, 0, 6}});
  expect_schur_invariants(up, rail::real_schur(up));
  const Matrix z(5, 5);
  const auto f = rail::real_schur(z);
  EXPECT_EQ(f.t.max_abs(), 0.0);
  EXPECT_LE(rail::orthonormality_defect(f.q), 1e-15);
}

TEST(RealSchur, NonSquareThrows) {
  EXPECT_THROW(rail::real_schur(Matrix(3, 2)), rail::ArgumentError);
}

// ---------------------------------------------------------------- Matrix

TEST(Matrix, ProductsAgreeWithEigen) {
  std::mt19937_64 rng(13);
  const Matrix a = random_matrix(5, 4, rng);
  const Matrix b = random_matrix(4, 3, rng);
  const Matrix c = random_matrix(5, 3, rng);
  const auto ea = rail::testing::to_eigen(a);
  EXPECT_LE(rail::max_abs_diff(rail::matmul(a, b),
                               rail::testing::from_eigen(ea * rail::testing::to_eigen(b))),
            1e-14);
  EXPECT_LE(rail::max_abs_diff(rail::matmul_tn(a, c), rail::testing::from_eigen(
                                                           ea.transpose() * rail::testing::to_eigen(c))),
            1e-14);
  EXPECT_LE(rail::max_abs_diff(rail::matmul_nt(b.transpose(), b.transpose()),
                               rail::matmul(b.transpose(), b)),
            1e-14);
}

TEST(Matrix, ConcatenationAndBlocks) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  const Matrix b = Matrix::from_rows({{5}, {6}});
  const Matrix h = rail::hcat({a, Matrix(), b});
  ASSERT_EQ(h.cols(), 3u);
  EXPECT_EQ(h(1, 2), 6.0);
  const Matrix d = rail::block_diag({a, Matrix::from_rows({{7}})});
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d(2, 2), 7.0);
  EXPECT_EQ(d(0, 2), 0.0);
  EXPECT_EQ(h.block(0, 1, 2, 2)(0, 0), 2.0);
  EXPECT_THROW(rail::hcat({a, Matrix(3, 1)}), rail::ArgumentError);
  EXPECT_THROW(rail::matmul(a, Matrix(3, 3)), rail::ArgumentError);
}

TEST(Matrix, HadamardScaling) {
  const Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
  const std::vector<double> v = {10, 100};
  const Matrix s = rail::scale_rows(v, m);
  EXPECT_EQ(s(0, 1), 20.0);
  EXPECT_EQ(s(1, 0), 300.0);
  const Matrix c = rail::scale_cols(m, v);
  EXPECT_EQ(c(1, 1), 400.0);
}

}  // namespace
