#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rail/errors.hpp"
#include "rail/linalg/decompositions.hpp"

namespace rail {

namespace {

// Householder reduction to upper Hessenberg form, h = z^T a z.
void hessenberg(Matrix& h, Matrix& z) {
  const std::size_t n = h.rows();
  z = Matrix::identity(n);
  if (n < 3) return;
  const std::size_t high = n - 1;
  std::vector<double> ort(n, 0.0);

  for (std::size_t m = 1; m < high; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i <= high; ++i) scale += std::fabs(h(i, m - 1));
    if (scale == 0.0) continue;

    double hh = 0.0;
    for (std::size_t i = high + 1; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;

    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = high + 1; i-- > m;) f += ort[i] * h(i, j);
      f /= hh;
      for (std::size_t i = m; i <= high; ++i) h(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i <= high; ++i) {
      double f = 0.0;
      for (std::size_t j = high + 1; j-- > m;) f += ort[j] * h(i, j);
      f /= hh;
      for (std::size_t j = m; j <= high; ++j) h(i, j) -= f * ort[j];
    }
    // Accumulate P_m = I - v v^T / hh into z (z <- z * P_m); v is ort[m..high].
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = m; j <= high; ++j) f += z(i, j) * ort[j];
      f /= hh;
      for (std::size_t j = m; j <= high; ++j) z(i, j) -= f * ort[j];
    }
    h(m, m - 1) = scale * g;
    for (std::size_t i = m + 1; i <= high; ++i) h(i, m - 1) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix, accumulating the
// orthogonal transformations into z. Follows the EISPACK hqr2 iteration
// (without the eigenvector back-substitution), splitting real 2x2 blocks.
void francis_qr(Matrix& h, Matrix& z) {
  const int nn = static_cast<int>(h.rows());
  const int low = 0;
  const int high = nn - 1;
  const double eps = std::numeric_limits<double>::epsilon();
  const long max_iterations = 100L * nn;

  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, zz = 0, w, x, y;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::fabs(h(i, j));

  int n = nn - 1;
  int iter = 0;
  long total_iter = 0;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::fabs(h(l, l - 1)) <= eps * s) break;
      --l;
    }

    if (l == n) {
      // One root.
      h(n, n) += exshift;
      if (n > 0) h(n, n - 1) = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      // Two roots.
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      zz = std::sqrt(std::fabs(q));
      h(n, n) += exshift;
      h(n - 1, n - 1) += exshift;
      x = h(n, n);
      if (q >= 0) {
        zz = p >= 0 ? p + zz : p - zz;
        x = h(n, n - 1);
        s = std::fabs(x) + std::fabs(zz);
        p = x / s;
        q = zz / s;
        r = std::sqrt(p * p + q * q);
        p /= r;
        q /= r;
        for (int j = n - 1; j < nn; ++j) {
          zz = h(n - 1, j);
          h(n - 1, j) = q * zz + p * h(n, j);
          h(n, j) = q * h(n, j) - p * zz;
        }
        for (int i = 0; i <= n; ++i) {
          zz = h(i, n - 1);
          h(i, n - 1) = q * zz + p * h(i, n);
          h(i, n) = q * h(i, n) - p * zz;
        }
        for (int i = low; i <= high; ++i) {
          zz = z(i, n - 1);
          z(i, n - 1) = q * zz + p * z(i, n);
          z(i, n) = q * z(i, n) - p * zz;
        }
        h(n, n - 1) = 0.0;
      }
      if (n - 1 > 0) h(n - 1, n - 2) = 0.0;
      n -= 2;
      iter = 0;
    } else {
      if (++total_iter > max_iterations) {
        throw NumericError("real_schur: QR iterations exceeded cap of " +
                           std::to_string(max_iterations));
      }
      x = h(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = h(n - 1, n - 1);
        w = h(n, n - 1) * h(n - 1, n);
      }
      // Exceptional shifts.
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) h(i, i) -= x;
        s = std::fabs(h(n, n - 1)) + std::fabs(h(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) h(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      int m = n - 2;
      while (m >= l) {
        zz = h(m, m);
        r = x - zz;
        s = y - zz;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - zz - r - s;
        r = h(m + 2, m + 1);
        s = std::fabs(p) + std::fabs(q) + std::fabs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r)) <
            eps * (std::fabs(p) * (std::fabs(h(m - 1, m - 1)) + std::fabs(zz) +
                                   std::fabs(h(m + 1, m + 1))))) {
          break;
        }
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2) h(i, i - 3) = 0.0;
      }

      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::fabs(p) + std::fabs(q) + std::fabs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s != 0) {
          if (k != m) {
            h(k, k - 1) = -s * x;
          } else if (l != m) {
            h(k, k - 1) = -h(k, k - 1);
          }
          p += s;
          x = p / s;
          y = q / s;
          zz = r / s;
          q /= p;
          r /= p;
          for (int j = k; j < nn; ++j) {
            p = h(k, j) + q * h(k + 1, j);
            if (notlast) {
              p += r * h(k + 2, j);
              h(k + 2, j) -= p * zz;
            }
            h(k, j) -= p * x;
            h(k + 1, j) -= p * y;
          }
          for (int i = 0; i <= std::min(n, k + 3); ++i) {
            p = x * h(i, k) + y * h(i, k + 1);
            if (notlast) {
              p += zz * h(i, k + 2);
              h(i, k + 2) -= p * r;
            }
            h(i, k) -= p;
            h(i, k + 1) -= p * q;
          }
          for (int i = low; i <= high; ++i) {
            p = x * z(i, k) + y * z(i, k + 1);
            if (notlast) {
              p += zz * z(i, k + 2);
              z(i, k + 2) -= p * r;
            }
            z(i, k) -= p;
            z(i, k + 1) -= p * q;
          }
        }
      }
    }
  }
}

}  // namespace

SchurFactors real_schur(const Matrix& a) {
  if (a.rows() != a.cols()) throw ArgumentError("real_schur: matrix is not square");
  if (a.empty()) throw ArgumentError("real_schur: empty input");
  SchurFactors out{Matrix(), a};
  hessenberg(out.t, out.q);
  francis_qr(out.t, out.q);
  // Clean everything below the first subdiagonal and any deflated subdiagonal
  // entries that are round-off noise.
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 2; i < n; ++i) out.t(i, j) = 0.0;
  return out;
}

std::vector<std::size_t> schur_block_starts(const Matrix& t) {
  std::vector<std::size_t> starts;
  const std::size_t n = t.rows();
  for (std::size_t i = 0; i < n;) {
    starts.push_back(i);
    i += (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
  }
  return starts;
}

std::vector<std::complex<double>> schur_eigenvalues(const Matrix& t) {
  std::vector<std::complex<double>> ev;
  const auto starts = schur_block_starts(t);
  for (std::size_t b = 0; b < starts.size(); ++b) {
    const std::size_t i = starts[b];
    const std::size_t size = (b + 1 < starts.size() ? starts[b + 1] : t.rows()) - i;
    if (size == 1) {
      ev.emplace_back(t(i, i), 0.0);
      continue;
    }
    const double a11 = t(i, i), a12 = t(i, i + 1), a21 = t(i + 1, i), a22 = t(i + 1, i + 1);
    const double half_tr = 0.5 * (a11 + a22);
    const double det = a11 * a22 - a12 * a21;
    const double disc = half_tr * half_tr - det;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      ev.emplace_back(half_tr + sq, 0.0);
      ev.emplace_back(half_tr - sq, 0.0);
    } else {
      const double sq = std::sqrt(-disc);
      ev.emplace_back(half_tr, sq);
      ev.emplace_back(half_tr, -sq);
    }
  }
  return ev;
}

}  // namespace rail
