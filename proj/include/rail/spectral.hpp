#pragma once

// Uniform periodic grids and Fourier collocation differentiation matrices.

#include <cstddef>
#include <vector>

#include "rail/linalg/matrix.hpp"

namespace rail {

/// n points covering [left, right) with the right endpoint identified with the left.
struct Grid1D {
  std::size_t n = 0;
  double left = 0.0;
  double right = 0.0;
  double dx = 0.0;
  std::vector<double> points;

  double length() const { return right - left; }
};

struct DiffOps {
  Matrix d1;
  Matrix d2;
};

/// Throws ArgumentError unless n is even, n >= 4 and right > left.
Grid1D make_grid(std::size_t n, double left, double right);

/// First and second derivative matrices. d2 comes from the closed-form
/// second-derivative stencil rather than d1 * d1, which differ on the
/// Nyquist mode.
DiffOps fourier_diff(const Grid1D& grid);

/// Tensor-product grid with one set of differentiation matrices per dimension.
struct Grid2D {
  Grid1D x;
  Grid1D y;
  DiffOps dx_ops;
  DiffOps dy_ops;

  double cell_area() const { return x.dx * y.dx; }
};

Grid2D make_grid2d(std::size_t n, double left, double right);
Grid2D make_grid2d(const Grid1D& x, const Grid1D& y);

}  // namespace rail
