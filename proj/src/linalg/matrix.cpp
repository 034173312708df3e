#include "rail/linalg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rail/errors.hpp"
#include "rail/linalg/kernels.hpp"

namespace rail {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ArgumentError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()) + ")");
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr == 0 ? 0 : rows.begin()->size();
  Matrix m(nr, nc);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != nc) throw ArgumentError("Matrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::column(std::span<const double> v) {
  Matrix m(v.size(), 1);
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ArgumentError("Matrix::block: out of range");
  Matrix b(nr, nc);
  for (std::size_t j = 0; j < nc; ++j) {
    const double* src = data_.data() + (c0 + j) * rows_ + r0;
    std::copy(src, src + nr, b.data() + j * nr);
  }
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw ArgumentError("Matrix::set_block: out of range");
  }
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const auto src = b.col(j);
    std::copy(src.begin(), src.end(), data_.data() + (c0 + j) * rows_ + r0);
  }
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "operator+=");
  kernels::axpy(1.0, o.values(), values());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "operator-=");
  kernels::axpy(-1.0, o.values(), values());
  return *this;
}

Matrix& Matrix::operator*=(double a) {
  kernels::scale(a, values());
  return *this;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

double Matrix::frobenius_norm() const { return std::sqrt(kernels::dot(values(), values())); }

double Matrix::sum() const { return kernels::sum(values()); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, double s) { return a *= s; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj != 0.0) kernels::axpy(bkj, a.col(k), cj);
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ArgumentError("matmul_tn: row counts differ");
  Matrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = kernels::dot(a.col(i), b.col(j));
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ArgumentError("matmul_nt: column counts differ");
  Matrix c(a.rows(), b.rows());
  for (std::size_t j = 0; j < b.rows(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bjk = b(j, k);
      if (bjk != 0.0) kernels::axpy(bjk, a.col(k), cj);
    }
  }
  return c;
}

Matrix hcat(std::span<const Matrix> blocks) {
  if (blocks.empty()) return {};
  const std::size_t nr = blocks.front().rows();
  std::size_t nc = 0;
  for (const auto& b : blocks) {
    if (b.rows() != nr && !b.empty()) throw ArgumentError("hcat: row counts differ");
    if (!b.empty()) nc += b.cols();
  }
  Matrix out(nr, nc);
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    if (b.empty()) continue;
    out.set_block(0, c0, b);
    c0 += b.cols();
  }
  return out;
}

Matrix hcat(std::initializer_list<Matrix> blocks) {
  return hcat(std::span<const Matrix>(blocks.begin(), blocks.size()));
}

Matrix block_diag(std::span<const Matrix> blocks) {
  std::size_t nr = 0;
  std::size_t nc = 0;
  for (const auto& b : blocks) {
    nr += b.rows();
    nc += b.cols();
  }
  Matrix out(nr, nc);
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    out.set_block(r0, c0, b);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

Matrix block_diag(std::initializer_list<Matrix> blocks) {
  return block_diag(std::span<const Matrix>(blocks.begin(), blocks.size()));
}

Matrix scale_rows(std::span<const double> v, const Matrix& m) {
  if (v.size() != m.rows()) throw ArgumentError("scale_rows: vector length != row count");
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) kernels::hadamard(v, m.col(j), out.col(j));
  return out;
}

Matrix scale_cols(const Matrix& m, std::span<const double> d) {
  if (d.size() != m.cols()) throw ArgumentError("scale_cols: vector length != column count");
  Matrix out = m;
  for (std::size_t j = 0; j < m.cols(); ++j) kernels::scale(d[j], out.col(j));
  return out;
}

double orthonormality_defect(const Matrix& q) {
  const Matrix g = matmul_tn(q, q);
  double d = 0.0;
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < g.rows(); ++i)
      d = std::max(d, std::fabs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return d;
}

double distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "distance");
  return (a - b).frobenius_norm();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double d = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    d = std::max(d, std::fabs(a.values()[k] - b.values()[k]));
  return d;
}

}  // namespace rail
