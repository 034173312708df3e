#pragma once

// Low-rank solution representation U = Vx * S * Vy^T and the operations that
// reshape it: reduced augmentation of candidate bases, SVD truncation, the
// mass-conservative truncation, and the quadrature diagnostics.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rail/linalg/matrix.hpp"
#include "rail/spectral.hpp"

namespace rail {

/// Vx (N x r) and Vy (N x r) have orthonormal columns; s is r x r and not
/// necessarily diagonal.
struct LowRankState {
  Matrix vx;
  Matrix s;
  Matrix vy;

  std::size_t rank() const { return s.rows(); }
  Matrix dense() const;
};

/// General factored matrix x * c * y^T with no orthonormality assumption.
/// Sums of triples are kept as concatenated factors.
struct FactorTriple {
  Matrix x;
  Matrix c;
  Matrix y;

  std::size_t width() const { return c.rows(); }
  Matrix dense() const;
};

FactorTriple to_triple(const LowRankState& s);

/// sum_i coeffs[i] * terms[i] as one triple (block-diagonal core).
FactorTriple combine(std::span<const double> coeffs, std::span<const FactorTriple> terms);

/// T * v = x * c * (y^T v), N x k.
Matrix apply_right(const FactorTriple& t, const Matrix& v);
/// T^T * v = y * c^T * (x^T v), N x k.
Matrix apply_left_transposed(const FactorTriple& t, const Matrix& v);
/// vx^T * T * vy
Matrix project(const FactorTriple& t, const Matrix& vx, const Matrix& vy);

/// Separable positive weight w(x, y) = w1(x) w2(y).
struct WeightFunction {
  std::vector<double> w1;
  std::vector<double> w2;
};

/// Throws ArgumentError if any entry is not strictly positive and finite.
void validate_weight(const WeightFunction& w);
WeightFunction uniform_weight(std::size_t nx, std::size_t ny);

enum class TruncationCriterion {
  absolute,   // keep sigma_i > eps
  relative,   // keep sigma_i > eps * sigma_1
  frobenius,  // smallest r with sqrt(sum_{i>r} sigma_i^2) <= eps
};

/// Orthonormal basis for the span of hcat(bases), dropping directions whose
/// singular value in the stacked R factor is at or below tol.
Matrix reduced_augmentation(std::span<const Matrix> bases, double tol = 1e-12);

/// Paired x/y variant; both outputs have max(rx, ry) columns (at least 1).
std::pair<Matrix, Matrix> reduced_augmentation_pair(std::span<const Matrix> x_bases,
                                                    std::span<const Matrix> y_bases,
                                                    double tol = 1e-12);

/// Number of singular values retained under the criterion, at least 1.
std::size_t truncation_rank(std::span<const double> sigma, double eps,
                            TruncationCriterion criterion = TruncationCriterion::absolute);

/// Best low-rank approximation of the product, with diagonal non-increasing s.
LowRankState truncate_svd(const LowRankState& state, double eps,
                          TruncationCriterion criterion = TruncationCriterion::absolute);

/// Orthonormalises a general triple (QR of both factors, SVD of the core)
/// and truncates it.
LowRankState compress(const FactorTriple& t, double eps,
                      TruncationCriterion criterion = TruncationCriterion::absolute);

/// Truncation that keeps the zeroth moment equal to rho. The rank-one carrier
/// rho * w / (dx dy sum(w1) sum(w2)) is split off, the weighted remainder is
/// truncated at eps, and the remainder's residual mass is projected back onto
/// the carrier before the final re-orthonormalisation.
LowRankState conservative_truncate(const LowRankState& state, const WeightFunction& w, double rho,
                                   double eps, const Grid2D& grid);

/// dx * dy * sum_ij U_ij, evaluated factor-wise.
double mass(const LowRankState& state, const Grid2D& grid);
double mass(const FactorTriple& t, const Grid2D& grid);

/// dx * dy * sum_ij |A_ij - B_ij|
double l1_error(const LowRankState& a, const Matrix& b_dense, const Grid2D& grid);
double l1_error(const LowRankState& a, const LowRankState& b, const Grid2D& grid);

/// Appends orthonormal columns (coordinate directions orthogonalised against
/// the existing ones) until q has `cols` columns.
Matrix extend_orthonormal(const Matrix& q, std::size_t cols);

/// Pads the state to rank r0 with zero singular values; no-op if already >= r0.
LowRankState pad_rank(const LowRankState& state, std::size_t r0);

/// Max orthonormality defect of the two bases.
double basis_defect(const LowRankState& state);

}  // namespace rail
