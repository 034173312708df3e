#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rail/errors.hpp"
#include "rail/linalg/decompositions.hpp"
#include "rail/linalg/kernels.hpp"

namespace rail {

namespace {

// One-sided (Hestenes) Jacobi on the columns of `work` (m x n, m >= n). On
// return the columns are mutually orthogonal; `v`, when given, accumulates the
// rotations so that a * v = work.
void jacobi_orthogonalize(Matrix& work, Matrix* v) {
  const std::size_t m = work.rows();
  const std::size_t n = work.cols();
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 8.0 * eps * std::sqrt(static_cast<double>(m));
  const std::size_t max_sweeps = 100 * std::max<std::size_t>(n, 1);
  // Squared norms this small have lost their precision to underflow; such
  // columns are treated as zero.
  const double negligible = std::numeric_limits<double>::min() / eps;

  std::vector<double> norms2(n);
  for (std::size_t sweep = 0;; ++sweep) {
    if (sweep >= max_sweeps) {
      throw NumericError("svd: Jacobi sweeps exceeded cap of " + std::to_string(max_sweeps));
    }
    for (std::size_t j = 0; j < n; ++j) norms2[j] = kernels::dot(work.col(j), work.col(j));

    std::size_t rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norms2[p];
        const double beta = norms2[q];
        if (alpha <= negligible || beta <= negligible) continue;
        const double gamma = kernels::dot(work.col(p), work.col(q));
        if (std::fabs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        kernels::rotate(c, s, work.col(p), work.col(q));
        if (v != nullptr) kernels::rotate(c, s, v->col(p), v->col(q));
        norms2[p] = alpha - t * gamma;
        norms2[q] = beta + t * gamma;
        ++rotations;
      }
    }
    if (rotations == 0) return;
  }
}

// Fill columns of `u` flagged in `missing` with unit vectors orthogonal to all
// other columns (coordinate directions, Gram-Schmidt twice).
void complete_orthonormal(Matrix& u, const std::vector<bool>& missing) {
  const std::size_t m = u.rows();
  std::size_t next_coord = 0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    if (!missing[j]) continue;
    for (;; ++next_coord) {
      if (next_coord >= m) throw NumericError("svd: cannot complete orthonormal basis");
      std::vector<double> x(m, 0.0);
      x[next_coord] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < u.cols(); ++k) {
          if (k == j || (missing[k] && k > j)) continue;
          const double f = kernels::dot(u.col(k), x);
          kernels::axpy(-f, u.col(k), x);
        }
      }
      const double nx = std::sqrt(kernels::dot(x, x));
      if (nx > 0.5) {
        kernels::scale(1.0 / nx, x);
        std::copy(x.begin(), x.end(), u.col(j).begin());
        ++next_coord;
        break;
      }
    }
  }
}

SvdFactors svd_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  // Tall inputs are first compressed to their n x n triangular factor.
  Matrix q_pre;
  Matrix work;
  if (m > n) {
    QrFactors qr = qr_reduced(a);
    q_pre = std::move(qr.q);
    work = std::move(qr.r);
  } else {
    work = a;
  }

  Matrix v = Matrix::identity(n);
  jacobi_orthogonalize(work, &v);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(kernels::dot(work.col(j), work.col(j)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const std::size_t wr = work.rows();
  SvdFactors out{Matrix(wr, n), std::vector<double>(n), Matrix(n, n)};
  std::vector<bool> missing(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    std::copy(v.col(j).begin(), v.col(j).end(), out.v.col(k).begin());
    if (sigma[j] > 0.0) {
      auto dst = out.u.col(k);
      std::copy(work.col(j).begin(), work.col(j).end(), dst.begin());
      kernels::scale(1.0 / sigma[j], dst);
    } else {
      missing[k] = true;
    }
  }
  if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
    complete_orthonormal(out.u, missing);
  }
  if (m > n) out.u = matmul(q_pre, out.u);
  return out;
}

}  // namespace

SvdFactors svd(const Matrix& a) {
  if (a.empty()) throw ArgumentError("svd: empty input");
  if (a.rows() >= a.cols()) return svd_tall(a);
  SvdFactors t = svd_tall(a.transpose());
  std::swap(t.u, t.v);
  return t;
}

std::vector<double> singular_values(const Matrix& a) {
  if (a.empty()) throw ArgumentError("singular_values: empty input");
  Matrix work = a.rows() >= a.cols() ? a : a.transpose();
  if (work.rows() > work.cols()) work = qr_reduced(work).r;
  jacobi_orthogonalize(work, nullptr);
  std::vector<double> sigma(work.cols());
  for (std::size_t j = 0; j < work.cols(); ++j)
    sigma[j] = std::sqrt(kernels::dot(work.col(j), work.col(j)));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

}  // namespace rail
