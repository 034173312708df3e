#include "rail/problems.hpp"

#include <cmath>
#include <numbers>

#include "rail/errors.hpp"

namespace rail {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const Grid1D& g, const std::function<double(double)>& f) {
  std::vector<double> out(g.n);
  for (std::size_t i = 0; i < g.n; ++i) out[i] = f(g.points[i]);
  return out;
}

Matrix column_of(const Grid1D& g, const std::function<double(double)>& f) {
  return Matrix::column(sample(g, f));
}

// Exact-rank orthonormal state from a triple whose factors are linearly
// independent; small enough that the truncation floor never bites.
LowRankState exact_state(const FactorTriple& t) { return compress(t, 0.0); }

LowRankState gaussian_pair(const Grid2D& g, double a1, double x1, double y1, double a2, double x2,
                           double y2, double k) {
  Matrix x = hcat({column_of(g.x, [=](double v) { return std::exp(-k * (v - x1) * (v - x1)); }),
                   column_of(g.x, [=](double v) { return std::exp(-k * (v - x2) * (v - x2)); })});
  Matrix y = hcat({column_of(g.y, [=](double v) { return std::exp(-k * (v - y1) * (v - y1)); }),
                   column_of(g.y, [=](double v) { return std::exp(-k * (v - y2) * (v - y2)); })});
  Matrix c = Matrix::from_rows({{a1, 0.0}, {0.0, a2}});
  return exact_state({x, c, y});
}

Matrix dense_from(const Grid2D& g, const std::function<double(double, double)>& f) {
  Matrix m(g.x.n, g.y.n);
  for (std::size_t j = 0; j < g.y.n; ++j)
    for (std::size_t i = 0; i < g.x.n; ++i) m(i, j) = f(g.x.points[i], g.y.points[j]);
  return m;
}

constexpr double kRotationD = 0.2;
constexpr double kGasConstant = 1.0 / 6.0;
constexpr double kLbfpTemperature = 3.0;

}  // namespace

double swirl_profile(double t, double t_final) { return kPi * std::cos(kPi * t / t_final); }

double cosine_bell(double x, double y) {
  const double r0 = 0.3 * kPi;
  const double dx = x - 0.3 * kPi;
  const double r = std::sqrt(dx * dx + y * y);
  if (r >= r0) return 0.0;
  return r0 * std::pow(std::cos(r * kPi / (2.0 * r0)), 6);
}

FactorTriple maxwellian(const Grid2D& grid, double density, double bulk_x, double temperature,
                        double gas_constant) {
  const double rt2 = 2.0 * gas_constant * temperature;
  Matrix x = column_of(grid.x, [=](double v) { return std::exp(-(v - bulk_x) * (v - bulk_x) / rt2); });
  Matrix y = column_of(grid.y, [=](double v) { return std::exp(-v * v / rt2); });
  Matrix c(1, 1, density / (kPi * rt2));
  return {x, c, y};
}

BenchmarkSpec make_diffusion_benchmark() {
  BenchmarkSpec s;
  s.name = "diffusion";
  s.description = "anisotropic heat equation, two Gaussians on (0,14)^2";
  s.left = 0.0;
  s.right = 14.0;
  s.d1 = 0.25;
  s.d2 = 1.0 / 9.0;
  s.defaults = {200, 0.3, 1e-8, 20, 0.5, Scheme::dirk2, TruncationKind::conservative,
                WeightKind::uniform, 5e-9};
  s.initial = [](const Grid2D& g) { return gaussian_pair(g, 0.8, 6.5, 6.5, 0.5, 7.5, 7.0, 15.0); };
  return s;
}

BenchmarkSpec make_rigid_rotation_benchmark(bool free_mode) {
  BenchmarkSpec s;
  s.left = -2.0 * kPi;
  s.right = 2.0 * kPi;
  s.d1 = kRotationD;
  s.d2 = kRotationD;
  s.flows = [](const Grid2D& g, double) {
    std::vector<RankOneFlow> f(2);
    f[0] = {std::vector<double>(g.x.n, 1.0), nullptr, sample(g.y, [](double y) { return -y; })};
    f[1] = {sample(g.x, [](double x) { return x; }), nullptr, std::vector<double>(g.y.n, 1.0)};
    return f;
  };
  if (free_mode) {
    s.name = "rigid-rotation-free";
    s.description = "source-free rotation of exp(-(x^2+9y^2)) with diffusion d=1/5";
    s.defaults = {200, 0.15, 1e-8, 20, kPi / 2.0, Scheme::imex443, TruncationKind::conservative,
                  WeightKind::uniform, 5e-9};
    s.initial = [](const Grid2D& g) {
      FactorTriple t{column_of(g.x, [](double x) { return std::exp(-x * x); }), Matrix(1, 1, 1.0),
                     column_of(g.y, [](double y) { return std::exp(-9.0 * y * y); })};
      return exact_state(t);
    };
    return s;
  }
  s.name = "rigid-rotation";
  s.description = "rotation with diffusion d=1/5 and manufactured source, exact solution known";
  s.defaults = {200, 0.5, 1e-8, 20, 0.5, Scheme::imex222, TruncationKind::conservative,
                WeightKind::uniform, 5e-9};
  s.source = [](const Grid2D& g, double t) {
    const double d = kRotationD;
    const double e = std::exp(-2.0 * d * t);
    Matrix x = hcat({column_of(g.x, [](double v) { return std::exp(-v * v); }),
                     column_of(g.x, [](double v) { return v * std::exp(-v * v); }),
                     column_of(g.x, [](double v) { return v * v * std::exp(-v * v); })});
    Matrix y = hcat({column_of(g.y, [](double v) { return std::exp(-3.0 * v * v); }),
                     column_of(g.y, [](double v) { return v * std::exp(-3.0 * v * v); }),
                     column_of(g.y, [](double v) { return v * v * std::exp(-3.0 * v * v); })});
    Matrix c(3, 3);
    c(0, 0) = 6.0 * d * e;
    c(1, 1) = -4.0 * e;
    c(2, 0) = -4.0 * d * e;
    c(0, 2) = -36.0 * d * e;
    return FactorTriple{x, c, y};
  };
  s.exact = [](const Grid2D& g, double t) {
    return dense_from(g, [t](double x, double y) {
      return std::exp(-(x * x + 3.0 * y * y + 2.0 * kRotationD * t));
    });
  };
  s.initial = [](const Grid2D& g) {
    FactorTriple t{column_of(g.x, [](double x) { return std::exp(-x * x); }), Matrix(1, 1, 1.0),
                   column_of(g.y, [](double y) { return std::exp(-3.0 * y * y); })};
    return exact_state(t);
  };
  return s;
}

BenchmarkSpec make_swirling_benchmark() {
  BenchmarkSpec s;
  s.name = "swirling";
  s.description = "swirling deformation of a cosine bell with unit diffusion on (-pi,pi)^2";
  s.left = -kPi;
  s.right = kPi;
  s.d1 = 1.0;
  s.d2 = 1.0;
  s.defaults = {100, 0.5, 1e-8, 15, 0.5, Scheme::imex222, TruncationKind::conservative,
                WeightKind::uniform, 5e-9};
  s.flows = [](const Grid2D& g, double t_final) {
    auto profile = [t_final](double t) { return swirl_profile(t, t_final); };
    std::vector<RankOneFlow> f(2);
    f[0] = {sample(g.x, [](double x) { return -std::pow(std::cos(0.5 * x), 2); }), profile,
            sample(g.y, [](double y) { return std::sin(y); })};
    f[1] = {sample(g.x, [](double x) { return std::sin(x); }), profile,
            sample(g.y, [](double y) { return std::pow(std::cos(0.5 * y), 2); })};
    return f;
  };
  s.initial = [](const Grid2D& g) {
    const Matrix bell = dense_from(g, cosine_bell);
    return compress({Matrix::identity(g.x.n), bell, Matrix::identity(g.y.n)}, 1e-12);
  };
  return s;
}

BenchmarkSpec make_lbfp_benchmark() {
  BenchmarkSpec s;
  s.name = "lbfp";
  s.description = "Lenard-Bernstein Fokker-Planck relaxation of two Maxwellians on (-8,8)^2";
  s.left = -8.0;
  s.right = 8.0;
  s.d1 = kGasConstant * kLbfpTemperature;
  s.d2 = s.d1;
  s.defaults = {300, 0.15, 1e-6, 30, 15.0, Scheme::imex222, TruncationKind::conservative,
                WeightKind::maxwellian, 5e-9};
  s.flows = [](const Grid2D& g, double) {
    std::vector<RankOneFlow> f(2);
    f[0] = {sample(g.x, [](double v) { return -v; }), nullptr, std::vector<double>(g.y.n, 1.0)};
    f[1] = {std::vector<double>(g.x.n, 1.0), nullptr, sample(g.y, [](double v) { return -v; })};
    return f;
  };
  s.initial = [](const Grid2D& g) {
    const FactorTriple m1 =
        maxwellian(g, 1.990964530353041, 0.4979792385268875, 2.46518981703837, kGasConstant);
    const FactorTriple m2 =
        maxwellian(g, 1.150628123236752, -0.8616676237412346, 0.4107062104302872, kGasConstant);
    const double ones[] = {1.0, 1.0};
    const FactorTriple terms[] = {m1, m2};
    return exact_state(combine(ones, terms));
  };
  s.equilibrium = [](const Grid2D& g) {
    return maxwellian(g, kPi, 0.0, kLbfpTemperature, kGasConstant).dense();
  };
  return s;
}

const std::vector<BenchmarkSpec>& benchmarks() {
  static const std::vector<BenchmarkSpec> all = {
      make_diffusion_benchmark(), make_rigid_rotation_benchmark(false),
      make_rigid_rotation_benchmark(true), make_swirling_benchmark(), make_lbfp_benchmark()};
  return all;
}

const BenchmarkSpec& find_benchmark(const std::string& name) {
  for (const auto& b : benchmarks())
    if (b.name == name) return b;
  throw ArgumentError("unknown problem '" + name + "'");
}

Grid2D benchmark_grid(const BenchmarkSpec& spec, std::size_t n) {
  return make_grid2d(n, spec.left, spec.right);
}

ProblemOperators make_operators(const BenchmarkSpec& spec, const Grid2D& grid, double t_final) {
  ProblemOperators ops;
  ops.fx = spec.d1 * grid.dx_ops.d2;
  ops.fy = spec.d2 * grid.dy_ops.d2;
  if (spec.has_flow()) {
    auto flows = spec.flows(grid, t_final);
    DiffOps dx = grid.dx_ops;
    DiffOps dy = grid.dy_ops;
    ops.explicit_term = [flows = std::move(flows), dx = std::move(dx), dy = std::move(dy)](
                            double t, const LowRankState& u) {
      return explicit_flux_divergence(u, flows, dx, dy, t);
    };
  }
  if (spec.has_source()) {
    ops.source = [src = spec.source, grid](double t) { return src(grid, t); };
  }
  return ops;
}

WeightFunction make_weight(WeightKind kind, const Grid2D& grid, double delta) {
  if (kind == WeightKind::uniform) return uniform_weight(grid.x.n, grid.y.n);
  if (!(delta > 0.0)) throw ArgumentError("make_weight: delta must be positive");
  WeightFunction w;
  w.w1 = sample(grid.x, [delta](double v) { return std::exp(-0.5 * v * v) + delta; });
  w.w2 = sample(grid.y, [delta](double v) { return std::exp(-0.5 * v * v) + delta; });
  return w;
}

LowRankState initial_state(const BenchmarkSpec& spec, const Grid2D& grid, std::size_t r0) {
  return pad_rank(spec.initial(grid), r0);
}

}  // namespace rail
