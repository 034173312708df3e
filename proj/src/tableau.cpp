#include "rail/tableau.hpp"

#include <cmath>
#include <string>

#include "rail/errors.hpp"

namespace rail {

namespace {

constexpr double kTol = 1e-12;

void require(bool ok, const std::string& name, const std::string& what) {
  if (!ok) throw ArgumentError("tableau " + name + ": " + what);
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += a(i, j) * x[j];
  return y;
}

std::vector<double> squared(const std::vector<double>& x) {
  std::vector<double> y(x);
  for (double& v : y) v *= v;
  return y;
}

void check_order(const std::string& name, const std::vector<const Matrix*>& as,
                 const std::vector<const std::vector<double>*>& bs, const std::vector<double>& c,
                 int order) {
  for (const auto* b : bs) {
    double sum = 0.0;
    for (double v : *b) sum += v;
    require(std::fabs(sum - 1.0) <= kTol, name, "weights do not sum to 1");
    if (order >= 2) require(std::fabs(dot(*b, c) - 0.5) <= kTol, name, "second-order condition fails");
    if (order >= 3) {
      require(std::fabs(dot(*b, squared(c)) - 1.0 / 3.0) <= kTol, name,
              "third-order condition b.c^2 = 1/3 fails");
      for (const auto* a : as) {
        require(std::fabs(dot(*b, mat_vec(*a, c)) - 1.0 / 6.0) <= kTol, name,
                "third-order condition b.A.c = 1/6 fails");
      }
    }
  }
}

Matrix pad(const Matrix& a) {
  Matrix p(a.rows() + 1, a.cols() + 1);
  p.set_block(1, 1, a);
  return p;
}

}  // namespace

bool ButcherTableau::stiffly_accurate() const {
  const std::size_t s = stages();
  if (s == 0 || std::fabs(c[s - 1] - 1.0) > kTol) return false;
  for (std::size_t k = 0; k < s; ++k)
    if (std::fabs(a(s - 1, k) - b[k]) > kTol) return false;
  return true;
}

ButcherTableau make_dirk(std::string name, Matrix a, std::vector<double> b, std::vector<double> c,
                         int order) {
  const std::size_t s = b.size();
  require(s > 0 && a.rows() == s && a.cols() == s && c.size() == s, name, "inconsistent sizes");
  require(order >= 1 && order <= 3, name, "only orders 1 to 3 are checked");
  for (std::size_t i = 0; i < s; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      if (j > i) require(a(i, j) == 0.0, name, "not lower triangular");
      row += a(i, j);
    }
    require(a(i, i) > 0.0, name, "diagonal entries must be positive");
    require(std::fabs(row - c[i]) <= kTol, name, "abscissa does not match row sum");
  }
  check_order(name, {&a}, {&b}, c, order);
  return {std::move(name), std::move(a), std::move(b), std::move(c), order};
}

ImexTableau make_imex(std::string name, ButcherTableau implicit, Matrix explicit_a,
                      std::vector<double> explicit_b, int order) {
  const std::size_t s = implicit.stages();
  require(explicit_a.rows() == s + 1 && explicit_a.cols() == s + 1 && explicit_b.size() == s + 1,
          name, "explicit tableau must have s + 1 stages");
  require(order >= 1 && order <= 3, name, "only orders 1 to 3 are checked");
  std::vector<double> c(s + 1, 0.0);
  for (std::size_t k = 0; k < s; ++k) c[k + 1] = implicit.c[k];
  for (std::size_t i = 0; i <= s; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j <= s; ++j) {
      if (j >= i) require(explicit_a(i, j) == 0.0, name, "explicit part not strictly lower");
      row += explicit_a(i, j);
    }
    require(std::fabs(row - c[i]) <= kTol, name, "explicit abscissae differ from implicit ones");
  }
  const Matrix padded = pad(implicit.a);
  std::vector<double> padded_b(s + 1, 0.0);
  for (std::size_t k = 0; k < s; ++k) padded_b[k + 1] = implicit.b[k];
  check_order(name, {&padded, &explicit_a}, {&padded_b, &explicit_b}, c, order);
  return {std::move(name), std::move(implicit), std::move(explicit_a), std::move(explicit_b),
          std::move(c), order};
}

ButcherTableau backward_euler_tableau() {
  return make_dirk("be", Matrix::from_rows({{1.0}}), {1.0}, {1.0}, 1);
}

ButcherTableau dirk2_tableau() {
  const double nu = 1.0 - std::sqrt(2.0) / 2.0;
  return make_dirk("dirk2", Matrix::from_rows({{nu, 0.0}, {1.0 - nu, nu}}), {1.0 - nu, nu},
                   {nu, 1.0}, 2);
}

ButcherTableau dirk3_tableau() {
  const double nu = 0.435866521508459;
  const double b1 = -1.5 * nu * nu + 4.0 * nu - 0.25;
  const double b2 = 1.5 * nu * nu - 5.0 * nu + 1.25;
  return make_dirk("dirk3",
                   Matrix::from_rows({{nu, 0.0, 0.0}, {(1.0 - nu) / 2.0, nu, 0.0}, {b1, b2, nu}}),
                   {b1, b2, nu}, {nu, (1.0 + nu) / 2.0, 1.0}, 3);
}

ImexTableau imex111_tableau() {
  return make_imex("imex111", make_dirk("imex111-implicit", Matrix::from_rows({{1.0}}), {1.0}, {1.0}, 1),
                   Matrix::from_rows({{0.0, 0.0}, {1.0, 0.0}}), {1.0, 0.0}, 1);
}

ImexTableau imex222_tableau() {
  const double g = 1.0 - std::sqrt(2.0) / 2.0;
  const double d = 1.0 - 1.0 / (2.0 * g);
  auto implicit = make_dirk("imex222-implicit", Matrix::from_rows({{g, 0.0}, {1.0 - g, g}}),
                            {1.0 - g, g}, {g, 1.0}, 2);
  return make_imex("imex222", std::move(implicit),
                   Matrix::from_rows({{0.0, 0.0, 0.0}, {g, 0.0, 0.0}, {d, 1.0 - d, 0.0}}),
                   {d, 1.0 - d, 0.0}, 2);
}

ImexTableau imex443_tableau() {
  auto implicit = make_dirk("imex443-implicit",
                            Matrix::from_rows({{0.5, 0.0, 0.0, 0.0},
                                               {1.0 / 6.0, 0.5, 0.0, 0.0},
                                               {-0.5, 0.5, 0.5, 0.0},
                                               {1.5, -1.5, 0.5, 0.5}}),
                            {1.5, -1.5, 0.5, 0.5}, {0.5, 2.0 / 3.0, 0.5, 1.0}, 3);
  return make_imex("imex443", std::move(implicit),
                   Matrix::from_rows({{0.0, 0.0, 0.0, 0.0, 0.0},
                                      {0.5, 0.0, 0.0, 0.0, 0.0},
                                      {11.0 / 18.0, 1.0 / 18.0, 0.0, 0.0, 0.0},
                                      {5.0 / 6.0, -5.0 / 6.0, 0.5, 0.0, 0.0},
                                      {0.25, 1.75, 0.75, -1.75, 0.0}}),
                   {0.25, 1.75, 0.75, -1.75, 0.0}, 3);
}

}  // namespace rail
