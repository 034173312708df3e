#pragma once

// Dense real matrix, column-major storage. Columns are contiguous, so a column
// is exposed as a std::span and most of the arithmetic below reduces to
// column kernels (axpy, dot, hadamard).

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rail {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// Row-major literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  /// Leading `nc` columns.
  Matrix left_cols(std::size_t nc) const { return block(0, 0, rows_, nc); }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double a);

  double max_abs() const;
  double frobenius_norm() const;
  double sum() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(Matrix a, double s);

/// A * B
Matrix matmul(const Matrix& a, const Matrix& b);
/// A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// Horizontal concatenation; all blocks must share the row count.
Matrix hcat(std::span<const Matrix> blocks);
Matrix hcat(std::initializer_list<Matrix> blocks);
Matrix block_diag(std::span<const Matrix> blocks);
Matrix block_diag(std::initializer_list<Matrix> blocks);

/// Columnwise Hadamard product: every column of `m` multiplied entrywise by `v`.
Matrix scale_rows(std::span<const double> v, const Matrix& m);
/// Every column j of `m` multiplied by d[j].
Matrix scale_cols(const Matrix& m, std::span<const double> d);

/// max_ij |A^T A - I|
double orthonormality_defect(const Matrix& q);

/// Frobenius norm of A - B.
double distance(const Matrix& a, const Matrix& b);
/// max_ij |A - B|
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace rail
