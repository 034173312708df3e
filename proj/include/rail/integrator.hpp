#pragma once

// The reduced augmentation implicit low-rank stepper. Every stage solves a K
// and an L Sylvester equation on projected bases, rebuilds the bases by
// reduced augmentation, solves the Galerkin S equation and truncates.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rail/lowrank.hpp"
#include "rail/spectral.hpp"
#include "rail/sylvester.hpp"
#include "rail/tableau.hpp"

namespace rail {

/// dU/dt = Fx U + U Fy^T + Ex(t, U) + Phi(t).
struct ProblemOperators {
  Matrix fx;
  Matrix fy;
  /// Optional time-dependent implicit operators; when set they replace fx/fy
  /// and are sampled at stage times (Schur caching is then bypassed).
  std::function<Matrix(double)> fx_at;
  std::function<Matrix(double)> fy_at;
  /// Explicit (non-stiff) term, returned in factored form.
  std::function<FactorTriple(double, const LowRankState&)> explicit_term;
  /// Source term, returned in factored form.
  std::function<FactorTriple(double)> source;

  bool time_dependent() const { return static_cast<bool>(fx_at) || static_cast<bool>(fy_at); }
  bool has_explicit() const { return static_cast<bool>(explicit_term); }
  bool has_source() const { return static_cast<bool>(source); }
};

struct TruncationPolicy {
  double eps = 1e-8;
  TruncationCriterion criterion = TruncationCriterion::absolute;
  /// Use the mass-conservative truncation at the accepted stage.
  bool conservative = false;
  /// Also use it at internal stages.
  bool conservative_at_stages = false;
  WeightFunction weight;
  const Grid2D* grid = nullptr;
  /// Mass the conservative truncation restores; unset means the mass of the
  /// state just before truncation.
  std::optional<double> target_mass;
};

struct StepConfig {
  TruncationPolicy truncation;
  double augmentation_tol = 1e-12;
};

/// Coefficients of a stiffly accurate DIRK and an optional explicit partner,
/// in the padded indexing of ImexTableau (empty explicit_a for pure DIRK).
struct StageCoefficients {
  std::string name;
  Matrix a;
  Matrix explicit_a;
  std::vector<double> c;

  std::size_t stages() const { return a.rows(); }
  bool imex() const { return !explicit_a.empty(); }
};

StageCoefficients stage_coefficients(const ButcherTableau& t);
StageCoefficients stage_coefficients(const ImexTableau& t);

/// Per-step storage: the bases of every finished stage, the implicit
/// increments Y_l = Fx U(l) + U(l) Fy^T, explicit increments Ex(t(l-1), U(l-1))
/// and source samples Phi(t(l)), all in factored form.
struct StageWorkspace {
  LowRankState u_n;
  double t_n = 0.0;
  std::vector<Matrix> vx;
  std::vector<Matrix> vy;
  std::vector<FactorTriple> y;
  std::vector<FactorTriple> y_explicit;
  std::vector<FactorTriple> phi;
};

/// W(k-1) for 1-based stage k: U^n + dt sum_{l<k} a_kl Y_l
///   + dt sum_{l<=k} a_kl Phi(t(l)) + dt sum_{l<=k} a~_{k+1,l} Y~_l.
/// Terms whose workspace entries are absent are skipped.
FactorTriple assemble_w(std::size_t k, const StageWorkspace& ws, double dt,
                        const StageCoefficients& coeffs);

/// Y = Fx U + U Fy^T as the rank-2r triple [Fx Vx, Vx] blkdiag(S, S) [Vy, Fy Vy]^T.
FactorTriple implicit_increment(const Matrix& fx, const Matrix& fy, const LowRankState& u);

/// First-order step (one K/L/S pass with V* = V^n). Rejects operators with an
/// explicit part or source.
LowRankState backward_euler_step(const LowRankState& state, const ProblemOperators& ops, double t,
                                 double dt, const StepConfig& cfg, SchurCache* cache = nullptr);

/// Stiffly accurate DIRK step. Throws ArgumentError for a non stiffly accurate
/// tableau or for operators with an explicit part or source.
LowRankState dirk_step(const LowRankState& state, const ProblemOperators& ops, double t, double dt,
                       const ButcherTableau& tableau, const StepConfig& cfg,
                       SchurCache* cache = nullptr);

/// IMEX step; the stiff operators and the source are implicit, Ex explicit.
LowRankState imex_step(const LowRankState& state, const ProblemOperators& ops, double t, double dt,
                       const ImexTableau& tableau, const StepConfig& cfg,
                       SchurCache* cache = nullptr);

enum class Scheme { be, dirk2, dirk3, imex111, imex222, imex443 };

std::string scheme_name(Scheme s);
/// Throws ArgumentError for unknown names.
Scheme parse_scheme(const std::string& name);
bool is_imex(Scheme s);
int scheme_order(Scheme s);

/// Owns the operators, the scheme coefficients and the Schur cache so that
/// factorizations of I - h F persist across steps of equal size.
class Stepper {
 public:
  Stepper(ProblemOperators ops, Scheme scheme, StepConfig cfg, std::size_t cache_capacity = 8);

  LowRankState step(const LowRankState& state, double t, double dt);

  const ProblemOperators& operators() const { return ops_; }
  StepConfig& config() { return cfg_; }
  const SchurCache& cache() const { return cache_; }

 private:
  ProblemOperators ops_;
  Scheme scheme_;
  StageCoefficients coeffs_;
  StepConfig cfg_;
  SchurCache cache_;
};

}  // namespace rail
