#include "rail/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rail/errors.hpp"
#include "rail/linalg/decompositions.hpp"
#include "rail/linalg/kernels.hpp"

namespace rail {

namespace {

std::vector<double> column_sums(const Matrix& m) {
  std::vector<double> out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) out[j] = kernels::sum(m.col(j));
  return out;
}

double bilinear(std::span<const double> a, const Matrix& c, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    if (b[j] == 0.0) continue;
    total += b[j] * kernels::dot(a, c.col(j));
  }
  return total;
}

std::size_t count_above(std::span<const double> sigma, double tol) {
  return static_cast<std::size_t>(
      std::count_if(sigma.begin(), sigma.end(), [tol](double s) { return s > tol; }));
}

// Singular values of the R factor of the stacked bases, together with Q and
// the left singular vectors of R.
struct StackSplit {
  Matrix q;
  SvdFactors r_svd;
};

StackSplit split_stack(std::span<const Matrix> bases) {
  if (bases.empty()) throw ArgumentError("reduced_augmentation: empty basis list");
  const std::size_t n = bases.front().rows();
  for (const auto& b : bases) {
    if (!b.empty() && b.rows() != n) throw ArgumentError("reduced_augmentation: row counts differ");
  }
  const Matrix stacked = hcat(bases);
  if (stacked.empty()) throw ArgumentError("reduced_augmentation: all bases empty");
  QrFactors qr = qr_reduced(stacked);
  return {std::move(qr.q), svd(qr.r)};
}

}  // namespace

Matrix LowRankState::dense() const { return matmul_nt(matmul(vx, s), vy); }

Matrix FactorTriple::dense() const { return matmul_nt(matmul(x, c), y); }

FactorTriple to_triple(const LowRankState& s) { return {s.vx, s.s, s.vy}; }

FactorTriple combine(std::span<const double> coeffs, std::span<const FactorTriple> terms) {
  if (coeffs.size() != terms.size()) throw ArgumentError("combine: coefficient count mismatch");
  std::vector<Matrix> xs, cs, ys;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (coeffs[i] == 0.0 || terms[i].width() == 0) continue;
    xs.push_back(terms[i].x);
    cs.push_back(coeffs[i] * terms[i].c);
    ys.push_back(terms[i].y);
  }
  if (xs.empty()) {
    const std::size_t nx = terms.empty() ? 0 : terms.front().x.rows();
    const std::size_t ny = terms.empty() ? 0 : terms.front().y.rows();
    return {Matrix(nx, 0), Matrix(0, 0), Matrix(ny, 0)};
  }
  return {hcat(xs), block_diag(cs), hcat(ys)};
}

Matrix apply_right(const FactorTriple& t, const Matrix& v) {
  if (t.width() == 0) return Matrix(t.x.rows(), v.cols());
  return matmul(t.x, matmul(t.c, matmul_tn(t.y, v)));
}

Matrix apply_left_transposed(const FactorTriple& t, const Matrix& v) {
  if (t.width() == 0) return Matrix(t.y.rows(), v.cols());
  return matmul(t.y, matmul_tn(t.c, matmul_tn(t.x, v)));
}

Matrix project(const FactorTriple& t, const Matrix& vx, const Matrix& vy) {
  if (t.width() == 0) return Matrix(vx.cols(), vy.cols());
  return matmul(matmul_tn(vx, t.x), matmul_nt(t.c, matmul_tn(vy, t.y)));
}

void validate_weight(const WeightFunction& w) {
  for (const auto* v : {&w.w1, &w.w2}) {
    for (double x : *v) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw ArgumentError("weight function must be strictly positive and finite");
      }
    }
  }
}

WeightFunction uniform_weight(std::size_t nx, std::size_t ny) {
  return {std::vector<double>(nx, 1.0), std::vector<double>(ny, 1.0)};
}

Matrix reduced_augmentation(std::span<const Matrix> bases, double tol) {
  StackSplit sp = split_stack(bases);
  const std::size_t r = std::max<std::size_t>(1, count_above(sp.r_svd.sigma, tol));
  return matmul(sp.q, sp.r_svd.u.left_cols(r));
}

std::pair<Matrix, Matrix> reduced_augmentation_pair(std::span<const Matrix> x_bases,
                                                    std::span<const Matrix> y_bases, double tol) {
  StackSplit sx = split_stack(x_bases);
  StackSplit sy = split_stack(y_bases);
  std::size_t r = std::max(count_above(sx.r_svd.sigma, tol), count_above(sy.r_svd.sigma, tol));
  r = std::max<std::size_t>(r, 1);
  r = std::min({r, sx.r_svd.u.cols(), sy.r_svd.u.cols()});
  return {matmul(sx.q, sx.r_svd.u.left_cols(r)), matmul(sy.q, sy.r_svd.u.left_cols(r))};
}

std::size_t truncation_rank(std::span<const double> sigma, double eps,
                            TruncationCriterion criterion) {
  if (sigma.empty()) return 0;
  std::size_t r = 0;
  switch (criterion) {
    case TruncationCriterion::absolute:
      r = count_above(sigma, eps);
      break;
    case TruncationCriterion::relative:
      r = count_above(sigma, eps * sigma[0]);
      break;
    case TruncationCriterion::frobenius: {
      double tail = 0.0;
      r = sigma.size();
      while (r > 0 && tail + sigma[r - 1] * sigma[r - 1] <= eps * eps) {
        tail += sigma[r - 1] * sigma[r - 1];
        --r;
      }
      break;
    }
  }
  return std::max<std::size_t>(r, 1);
}

LowRankState truncate_svd(const LowRankState& state, double eps, TruncationCriterion criterion) {
  const SvdFactors f = svd(state.s);
  const std::size_t r = truncation_rank(f.sigma, eps, criterion);
  return {matmul(state.vx, f.u.left_cols(r)),
          Matrix::diagonal(std::span<const double>(f.sigma.data(), r)),
          matmul(state.vy, f.v.left_cols(r))};
}

LowRankState compress(const FactorTriple& t, double eps, TruncationCriterion criterion) {
  if (t.width() == 0) throw ArgumentError("compress: empty triple");
  const QrFactors qx = qr_reduced(t.x);
  const QrFactors qy = qr_reduced(t.y);
  return truncate_svd({qx.q, matmul_nt(matmul(qx.r, t.c), qy.r), qy.q}, eps, criterion);
}

LowRankState conservative_truncate(const LowRankState& state, const WeightFunction& w, double rho,
                                   double eps, const Grid2D& grid) {
  validate_weight(w);
  const std::size_t nx = state.vx.rows();
  const std::size_t ny = state.vy.rows();
  if (w.w1.size() != nx || w.w2.size() != ny) {
    throw ArgumentError("conservative_truncate: weight size does not match state");
  }
  const double area = grid.cell_area();
  const double sum_w1 = kernels::sum(w.w1);
  const double sum_w2 = kernels::sum(w.w2);
  const double carrier_mass = area * sum_w1 * sum_w2;
  double s_f1 = rho / carrier_mass;

  const Matrix w1 = Matrix::column(w.w1);
  const Matrix w2 = Matrix::column(w.w2);
  std::vector<double> sqrt_w1(nx), sqrt_w2(ny), inv_sqrt_w1(nx), inv_sqrt_w2(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    sqrt_w1[i] = std::sqrt(w.w1[i]);
    inv_sqrt_w1[i] = 1.0 / sqrt_w1[i];
  }
  for (std::size_t i = 0; i < ny; ++i) {
    sqrt_w2[i] = std::sqrt(w.w2[i]);
    inv_sqrt_w2[i] = 1.0 / sqrt_w2[i];
  }

  // f2 = U - f1 in the weighted inner product.
  const QrFactors qx = qr_reduced(scale_rows(inv_sqrt_w1, hcat({w1, state.vx})));
  const QrFactors qy = qr_reduced(scale_rows(inv_sqrt_w2, hcat({w2, state.vy})));
  const Matrix core = block_diag({Matrix(1, 1, -s_f1), state.s});
  const SvdFactors f = svd(matmul_nt(matmul(qx.r, core), qy.r));
  const std::size_t r_f2 = count_above(f.sigma, eps);

  Matrix vx_f2 = scale_rows(sqrt_w1, matmul(qx.q, f.u.left_cols(r_f2)));
  Matrix vy_f2 = scale_rows(sqrt_w2, matmul(qy.q, f.v.left_cols(r_f2)));
  const Matrix s_f2 = Matrix::diagonal(std::span<const double>(f.sigma.data(), r_f2));

  // Remove the truncated remainder's mass from the carrier so the total is rho.
  if (r_f2 > 0) {
    const double m_f2 = area * bilinear(column_sums(vx_f2), s_f2, column_sums(vy_f2));
    s_f1 -= m_f2 / carrier_mass;
  }

  const QrFactors fx = qr_reduced(hcat({w1, vx_f2}));
  const QrFactors fy = qr_reduced(hcat({w2, vy_f2}));
  const SvdFactors g = svd(matmul_nt(matmul(fx.r, block_diag({Matrix(1, 1, s_f1), s_f2})), fy.r));
  return {matmul(fx.q, g.u), Matrix::diagonal(g.sigma), matmul(fy.q, g.v)};
}

double mass(const LowRankState& state, const Grid2D& grid) {
  return grid.cell_area() * bilinear(column_sums(state.vx), state.s, column_sums(state.vy));
}

double mass(const FactorTriple& t, const Grid2D& grid) {
  if (t.width() == 0) return 0.0;
  return grid.cell_area() * bilinear(column_sums(t.x), t.c, column_sums(t.y));
}

double l1_error(const LowRankState& a, const Matrix& b_dense, const Grid2D& grid) {
  if (a.vx.rows() != grid.x.n || a.vy.rows() != grid.y.n || b_dense.rows() != grid.x.n ||
      b_dense.cols() != grid.y.n) {
    throw ArgumentError("l1_error: operands do not match the grid");
  }
  const Matrix da = a.dense();
  return grid.cell_area() * kernels::abs_diff_sum(da.values(), b_dense.values());
}

double l1_error(const LowRankState& a, const LowRankState& b, const Grid2D& grid) {
  return l1_error(a, b.dense(), grid);
}

Matrix extend_orthonormal(const Matrix& q, std::size_t cols) {
  const std::size_t n = q.rows();
  if (cols > n) throw ArgumentError("extend_orthonormal: more columns than rows");
  if (cols <= q.cols()) return q;
  Matrix out(n, cols);
  out.set_block(0, 0, q);
  std::size_t have = q.cols();
  std::vector<double> x(n);
  for (std::size_t coord = 0; have < cols && coord < n; ++coord) {
    std::fill(x.begin(), x.end(), 0.0);
    x[coord] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < have; ++k) kernels::axpy(-kernels::dot(out.col(k), x), out.col(k), x);
    }
    const double nx = std::sqrt(kernels::dot(x, x));
    if (nx < 0.5) continue;
    kernels::scale(1.0 / nx, x);
    std::copy(x.begin(), x.end(), out.col(have).begin());
    ++have;
  }
  if (have < cols) throw NumericError("extend_orthonormal: could not complete the basis");
  return out;
}

LowRankState pad_rank(const LowRankState& state, std::size_t r0) {
  const std::size_t r = state.rank();
  if (r >= r0) return state;
  LowRankState out{extend_orthonormal(state.vx, r0), Matrix(r0, r0),
                   extend_orthonormal(state.vy, r0)};
  out.s.set_block(0, 0, state.s);
  return out;
}

double basis_defect(const LowRankState& state) {
  return std::max(orthonormality_defect(state.vx), orthonormality_defect(state.vy));
}

}  // namespace rail
