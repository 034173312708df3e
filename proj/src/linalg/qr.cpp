#include <algorithm>
#include <cmath>
#include <vector>

#include "rail/errors.hpp"
#include "rail/linalg/decompositions.hpp"
#include "rail/linalg/kernels.hpp"

namespace rail {

QrFactors qr_reduced(const Matrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  if (n == 0 || m == 0) throw ArgumentError("qr_reduced: empty input");
  const std::size_t k = std::min(n, m);

  Matrix work = a;
  // Householder vectors live in `vs`, each of length n - j; a zero tau marks an
  // identity reflector (column already reduced).
  std::vector<std::vector<double>> vs(k);
  std::vector<double> taus(k, 0.0);

  for (std::size_t j = 0; j < k; ++j) {
    auto col = work.col(j);
    const std::span<const double> below(col.data() + j + 1, n - j - 1);
    const double tail2 = kernels::dot(below, below);
    if (tail2 == 0.0) continue;

    const double alpha = col[j];
    const double norm = std::sqrt(alpha * alpha + tail2);
    const double beta = alpha <= 0.0 ? norm : -norm;
    std::vector<double> v(col.begin() + static_cast<std::ptrdiff_t>(j), col.end());
    v[0] = alpha - beta;
    const double vnorm2 = v[0] * v[0] + tail2;
    const double tau = 2.0 / vnorm2;

    col[j] = beta;
    std::fill(col.begin() + static_cast<std::ptrdiff_t>(j) + 1, col.end(), 0.0);
    for (std::size_t c = j + 1; c < m; ++c) {
      std::span<double> x(work.col(c).data() + j, n - j);
      const double f = tau * kernels::dot(v, x);
      kernels::axpy(-f, v, x);
    }
    vs[j] = std::move(v);
    taus[j] = tau;
  }

  QrFactors out{Matrix(n, k), Matrix(k, m)};
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i <= std::min(c, k - 1); ++i) out.r(i, c) = work(i, c);

  for (std::size_t i = 0; i < k; ++i) out.q(i, i) = 1.0;
  for (std::size_t jj = k; jj-- > 0;) {
    if (taus[jj] == 0.0) continue;
    const auto& v = vs[jj];
    for (std::size_t c = jj; c < k; ++c) {
      std::span<double> x(out.q.col(c).data() + jj, n - jj);
      const double f = taus[jj] * kernels::dot(v, x);
      kernels::axpy(-f, v, x);
    }
  }

  // Non-negative diagonal of R.
  for (std::size_t i = 0; i < k; ++i) {
    if (out.r(i, i) < 0.0) {
      for (std::size_t c = i; c < m; ++c) out.r(i, c) = -out.r(i, c);
      kernels::scale(-1.0, out.q.col(i));
    }
  }
  return out;
}

}  // namespace rail
