#include "rail/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rail/errors.hpp"

namespace rail {

Grid1D make_grid(std::size_t n, double left, double right) {
  if (n < 4 || n % 2 != 0) {
    throw ArgumentError("make_grid: point count must be even and >= 4, got " + std::to_string(n));
  }
  if (!(right > left) || !std::isfinite(left) || !std::isfinite(right)) {
    throw ArgumentError("make_grid: need finite left < right");
  }
  Grid1D g;
  g.n = n;
  g.left = left;
  g.right = right;
  g.dx = (right - left) / static_cast<double>(n);
  g.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.points[i] = left + static_cast<double>(i) * g.dx;
  return g;
}

DiffOps fourier_diff(const Grid1D& grid) {
  const std::size_t n = grid.n;
  const double pi = std::numbers::pi;
  const double h = 2.0 * pi / static_cast<double>(n);
  const double s = 2.0 * pi / grid.length();

  DiffOps ops{Matrix(n, n), Matrix(n, n)};
  const double d2_diag = (-pi * pi / (3.0 * h * h) - 1.0 / 6.0) * s * s;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) {
        ops.d2(i, j) = d2_diag;
        continue;
      }
      const long k = static_cast<long>(i) - static_cast<long>(j);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double half = 0.5 * static_cast<double>(k) * h;
      ops.d1(i, j) = 0.5 * sign / std::tan(half) * s;
      const double sn = std::sin(half);
      ops.d2(i, j) = -sign / (2.0 * sn * sn) * s * s;
    }
  }
  return ops;
}

Grid2D make_grid2d(std::size_t n, double left, double right) {
  const Grid1D g = make_grid(n, left, right);
  return make_grid2d(g, g);
}

Grid2D make_grid2d(const Grid1D& x, const Grid1D& y) {
  Grid2D g{x, y, fourier_diff(x), {}};
  g.dy_ops = (y.n == x.n && y.left == x.left && y.right == x.right) ? g.dx_ops : fourier_diff(y);
  return g;
}

}  // namespace rail
