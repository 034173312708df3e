#pragma once

// Benchmark problem definitions and the factored advection flux.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rail/integrator.hpp"
#include "rail/lowrank.hpp"
#include "rail/spectral.hpp"

namespace rail {

/// a(x, y, t) = ax(x) * at(t) * ay(y), sampled on the grid.
struct RankOneFlow {
  std::vector<double> ax;
  std::function<double(double)> at;
  std::vector<double> ay;
};

/// Low-rank source phix(t) * phit(t) * phiy(t)^T.
struct LowRankSource {
  std::function<FactorTriple(double)> at;
};

/// -(D_x (A1 o U) + (A2 o U) D_y^T) for U = Vx S Vy^T, as a rank-2r triple.
/// flows[0] is the x-component and flows[1] the y-component of the field.
FactorTriple explicit_flux_divergence(const LowRankState& state,
                                      const std::vector<RankOneFlow>& flows, const DiffOps& dx,
                                      const DiffOps& dy, double t);

enum class WeightKind { uniform, maxwellian };
enum class TruncationKind { svd, conservative };

struct BenchmarkDefaults {
  std::size_t n = 100;
  double lambda = 0.5;
  double eps = 1e-8;
  std::size_t r0 = 20;
  double t_final = 0.5;
  Scheme scheme = Scheme::dirk2;
  TruncationKind truncation = TruncationKind::svd;
  WeightKind weight = WeightKind::uniform;
  double weight_delta = 5e-9;
};

struct BenchmarkSpec {
  std::string name;
  std::string description;
  double left = 0.0;
  double right = 1.0;
  double d1 = 0.0;
  double d2 = 0.0;
  BenchmarkDefaults defaults;
  /// Advection components; empty function for pure diffusion. t_final enters
  /// through time profiles that depend on the run length.
  std::function<std::vector<RankOneFlow>(const Grid2D&, double t_final)> flows;
  std::function<FactorTriple(const Grid2D&, double t)> source;
  /// Initial data at its exact (unpadded) rank.
  std::function<LowRankState(const Grid2D&)> initial;
  std::function<Matrix(const Grid2D&, double t)> exact;
  /// Steady state the solution relaxes to, if any.
  std::function<Matrix(const Grid2D&)> equilibrium;

  bool has_flow() const { return static_cast<bool>(flows); }
  bool has_source() const { return static_cast<bool>(source); }
  bool has_exact() const { return static_cast<bool>(exact); }
};

BenchmarkSpec make_diffusion_benchmark();
/// With source; `free_mode` selects the source-free variant with
/// exp(-(x^2 + 9 y^2)) initial data.
BenchmarkSpec make_rigid_rotation_benchmark(bool free_mode = false);
BenchmarkSpec make_swirling_benchmark();
BenchmarkSpec make_lbfp_benchmark();

const std::vector<BenchmarkSpec>& benchmarks();
/// Throws ArgumentError for unknown names.
const BenchmarkSpec& find_benchmark(const std::string& name);

Grid2D benchmark_grid(const BenchmarkSpec& spec, std::size_t n);
ProblemOperators make_operators(const BenchmarkSpec& spec, const Grid2D& grid, double t_final);
WeightFunction make_weight(WeightKind kind, const Grid2D& grid, double delta);

/// Initial data padded to rank r0 (never truncated below its exact rank).
LowRankState initial_state(const BenchmarkSpec& spec, const Grid2D& grid, std::size_t r0);

/// Isotropic Maxwellian n / (2 pi R T) exp(-((vx - u)^2 + vy^2) / (2 R T)) as a rank-one triple.
FactorTriple maxwellian(const Grid2D& grid, double density, double bulk_x, double temperature,
                        double gas_constant);

/// Swirling time profile pi cos(pi t / t_final).
double swirl_profile(double t, double t_final);

/// Cosine bell value at (x, y).
double cosine_bell(double x, double y);

}  // namespace rail
