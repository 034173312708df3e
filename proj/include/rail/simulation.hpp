#pragma once

// Time loop, per-step diagnostics and convergence studies.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rail/config.hpp"
#include "rail/lowrank.hpp"
#include "rail/spectral.hpp"

namespace rail {

struct StepRecord {
  std::size_t step = 0;
  double time = 0.0;
  std::size_t rank = 0;
  double mass = 0.0;
  double rel_mass_dev = 0.0;
  std::optional<double> l1_error;
  std::optional<double> decay_l1;
};

struct SimulationResult {
  std::vector<StepRecord> records;
  LowRankState final_state;
  Grid2D grid;
  /// Nominal step; the final step may be shorter.
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Steps of size dt covering [0, t_final], the last one shortened to land on
/// t_final (a remainder below 1e-9 dt is absorbed into the previous step).
std::size_t step_count(double t_final, double dt);

/// Runs the configured problem from t = 0 to t_final with the nominal step.
/// Step 0 reports the rank of the initial data before padding. Throws
/// NumericError when ||U||_F exceeds 1e6 times its initial value.
SimulationResult run_simulation(const RunConfig& cfg,
                                const std::function<void(const StepRecord&)>& observer = {});

struct ConvergenceRow {
  double lambda = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double l1_error = 0.0;
  /// log(e_{i-1} / e_i) / log(dt_{i-1} / dt_i); unset on the first row.
  std::optional<double> order;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log(error) against log(dt).
  double slope = 0.0;
  std::string reference;
};

/// Runs cfg once per lambda (in parallel when `parallel`) and measures the
/// L1 error at t_final against the configured reference. A fine reference is
/// computed once, cached under cfg.cache_dir when set, and restricted to the
/// coarse grid by index subsampling. Throws ConfigError when no reference is
/// available or the grids are not commensurate.
ConvergenceTable run_convergence_study(const RunConfig& cfg, const std::vector<double>& lambdas,
                                       bool parallel = true);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

}  // namespace rail
