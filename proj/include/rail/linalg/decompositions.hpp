#pragma once

// QR, SVD and real Schur factorizations. All are pure functions of their
// input and safe to call from several threads at once.
//
// Sign conventions: QR returns R with a non-negative diagonal; SVD and Schur
// column signs are otherwise unspecified, so callers compare subspaces or
// absolute values, never raw columns.

#include <complex>
#include <vector>

#include "rail/linalg/matrix.hpp"

namespace rail {

/// Reduced QR: for an n x m input, q is n x k and r is k x m with k = min(n, m).
struct QrFactors {
  Matrix q;
  Matrix r;
};

/// Thin SVD: a = u * diag(sigma) * v^T with sigma non-increasing.
struct SvdFactors {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

/// a = q * t * q^T with t real quasi-upper-triangular (1x1 and 2x2 blocks).
struct SchurFactors {
  Matrix q;
  Matrix t;
};

/// Householder QR in economy mode. Throws ArgumentError on an empty input.
QrFactors qr_reduced(const Matrix& a);

/// One-sided Jacobi SVD. Throws NumericError when the sweep cap (100 * n) is hit.
SvdFactors svd(const Matrix& a);

/// Singular values only (same algorithm, no vector accumulation).
std::vector<double> singular_values(const Matrix& a);

/// Hessenberg reduction followed by Francis double-shift QR iterations.
/// Real-eigenvalue 2x2 blocks are split, so 2x2 blocks left in t always
/// carry a complex-conjugate pair.
SchurFactors real_schur(const Matrix& a);

/// Starting row of every diagonal block of a quasi-triangular matrix.
std::vector<std::size_t> schur_block_starts(const Matrix& t);

/// Eigenvalues read off the diagonal blocks of a quasi-triangular matrix.
std::vector<std::complex<double>> schur_eigenvalues(const Matrix& t);

}  // namespace rail
