#include "rail/integrator.hpp"

#include <cmath>
#include <string>

#include "rail/errors.hpp"

namespace rail {

namespace {

enum Axis : int { kAxisX = 0, kAxisY = 1 };

Matrix shifted_identity(const Matrix& f, double h) {
  Matrix a = -h * f;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += 1.0;
  return a;
}

// Everything a single step needs, bundled so the stage loop and the
// first-order predictor share the Sylvester and truncation plumbing.
class StepContext {
 public:
  StepContext(const ProblemOperators& ops, const StepConfig& cfg, SchurCache* cache)
      : ops_(ops), cfg_(cfg), cache_(ops.time_dependent() ? nullptr : cache) {}

  Matrix fx(double t) const { return ops_.fx_at ? ops_.fx_at(t) : ops_.fx; }
  Matrix fy(double t) const { return ops_.fy_at ? ops_.fy_at(t) : ops_.fy; }

  // Solves (I - h F) X - X b_small = rhs for the operator on `axis`.
  Matrix solve_big(Axis axis, const Matrix& f, double h, const Matrix& b_small,
                   const Matrix& rhs) const {
    auto build = [&] { return shifted_identity(f, h); };
    std::shared_ptr<const SchurFactors> sa =
        cache_ != nullptr ? cache_->get(axis, h, build)
                          : std::make_shared<const SchurFactors>(real_schur(build()));
    return solve_sylvester(*sa, real_schur(b_small), rhs);
  }

  // One K/L/S pass for U = W + h (Fx U + U Fy^T) projected with `star`
  // bases; `history` lists the bases that follow V-double-dagger in the
  // second augmentation. Returns the untruncated Galerkin state.
  LowRankState kls(const FactorTriple& w, const Matrix& star_x, const Matrix& star_y, double h,
                   double t_stage, const std::vector<Matrix>& history_x,
                   const std::vector<Matrix>& history_y) const {
    const Matrix fx_t = fx(t_stage);
    const Matrix fy_t = fy(t_stage);

    // K: (I - h Fx) K - K (h Vy*^T Fy^T Vy*) = W Vy*
    const Matrix by = h * matmul_tn(matmul(fy_t, star_y), star_y);
    const Matrix k = solve_big(kAxisX, fx_t, h, by, apply_right(w, star_y));
    // L: (I - h Fy) L - L (h Vx*^T Fx^T Vx*) = W^T Vx*
    const Matrix bx = h * matmul_tn(matmul(fx_t, star_x), star_x);
    const Matrix l = solve_big(kAxisY, fy_t, h, bx, apply_left_transposed(w, star_x));

    std::vector<Matrix> xs{qr_reduced(k).q};
    std::vector<Matrix> ys{qr_reduced(l).q};
    xs.insert(xs.end(), history_x.begin(), history_x.end());
    ys.insert(ys.end(), history_y.begin(), history_y.end());
    auto [hat_x, hat_y] = reduced_augmentation_pair(xs, ys, cfg_.augmentation_tol);

    // S: (I - h Vx^T Fx Vx) S - S (h Vy^T Fy^T Vy) = Vx^T W Vy
    const Matrix fx_hat = matmul(fx_t, hat_x);
    const Matrix fy_hat = matmul(fy_t, hat_y);
    const Matrix a_s = shifted_identity(matmul_tn(hat_x, fx_hat), h);
    const Matrix b_s = h * matmul_tn(fy_hat, hat_y);
    Matrix s = solve_sylvester(SylvesterProblem{a_s, b_s, project(w, hat_x, hat_y)});
    LowRankState out{std::move(hat_x), std::move(s), std::move(hat_y)};
    if (!out.s.all_finite()) throw NumericError("non-finite values in the Galerkin solve");
    return out;
  }

  LowRankState truncate(const LowRankState& pre, bool accepted) const {
    const TruncationPolicy& p = cfg_.truncation;
    if (p.conservative && (accepted || p.conservative_at_stages)) {
      if (p.grid == nullptr) throw ArgumentError("conservative truncation needs a grid");
      const double rho = p.target_mass.value_or(mass(pre, *p.grid));
      return conservative_truncate(pre, p.weight, rho, p.eps, *p.grid);
    }
    return truncate_svd(pre, p.eps, p.criterion);
  }

  const ProblemOperators& ops() const { return ops_; }

 private:
  const ProblemOperators& ops_;
  const StepConfig& cfg_;
  SchurCache* cache_;
};

void require_step(const LowRankState& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("time step must be positive");
  if (state.vx.cols() != state.rank() || state.vy.cols() != state.rank() ||
      state.s.rows() != state.s.cols() || state.rank() == 0) {
    throw ArgumentError("malformed low-rank state");
  }
}

LowRankState run_stages(const LowRankState& un, const ProblemOperators& ops, double t, double dt,
                        const StageCoefficients& co, const StepConfig& cfg, SchurCache* cache) {
  require_step(un, dt);
  const StepContext ctx(ops, cfg, cache);
  const std::size_t s = co.stages();
  const std::size_t n = un.vx.rows();

  StageWorkspace ws;
  ws.u_n = un;
  ws.t_n = t;
  LowRankState current = un;

  for (std::size_t k = 1; k <= s; ++k) {
    const double t_k = t + co.c[co.imex() ? k : k - 1] * dt;
    const double h = co.a(k - 1, k - 1) * dt;

    if (co.imex() && ops.has_explicit()) {
      const double t_prev = k == 1 ? t : t + co.c[k - 1] * dt;
      ws.y_explicit.push_back(ops.explicit_term(t_prev, current));
    }
    if (ops.has_source()) ws.phi.push_back(ops.source(t_k));
    const FactorTriple w = assemble_w(k, ws, dt, co);

    // Bases that follow the leading candidate in both augmentations.
    std::vector<Matrix> hist_x, hist_y;
    for (std::size_t l = ws.vx.size(); l-- > 0;) {
      hist_x.push_back(ws.vx[l]);
      hist_y.push_back(ws.vy[l]);
    }
    hist_x.push_back(un.vx);
    hist_y.push_back(un.vy);

    Matrix star_x = un.vx;
    Matrix star_y = un.vy;
    if (k > 1) {
      // First-order prediction from U^n to t(k).
      const double c_k = co.imex() ? co.c[k] : co.c[k - 1];
      const double hp = c_k * dt;
      std::vector<double> coef = {1.0};
      std::vector<FactorTriple> terms = {to_triple(un)};
      if (!ws.y_explicit.empty()) {
        coef.push_back(hp);
        terms.push_back(ws.y_explicit.front());
      }
      if (ops.has_source()) {
        coef.push_back(hp);
        terms.push_back(ops.source(t + hp));
      }
      const LowRankState pred = ctx.truncate(
          ctx.kls(combine(coef, terms), un.vx, un.vy, hp, t + hp, {un.vx}, {un.vy}), false);
      std::vector<Matrix> xs{pred.vx}, ys{pred.vy};
      xs.insert(xs.end(), hist_x.begin(), hist_x.end());
      ys.insert(ys.end(), hist_y.begin(), hist_y.end());
      std::tie(star_x, star_y) = reduced_augmentation_pair(xs, ys, cfg.augmentation_tol);
    }

    const LowRankState pre = ctx.kls(w, star_x, star_y, h, t_k, hist_x, hist_y);
    current = ctx.truncate(pre, k == s);
    if (current.rank() > n) throw NumericError("rank exceeds the grid size");

    if (k < s) {
      ws.vx.push_back(current.vx);
      ws.vy.push_back(current.vy);
      ws.y.push_back(implicit_increment(ctx.fx(t_k), ctx.fy(t_k), current));
    }
  }
  return current;
}

void require_implicit_only(const ProblemOperators& ops, const char* who) {
  if (ops.has_explicit() || ops.has_source()) {
    throw ArgumentError(std::string(who) +
                        ": operators have an explicit part or a source; use an IMEX scheme");
  }
}

}  // namespace

StageCoefficients stage_coefficients(const ButcherTableau& t) {
  if (!t.stiffly_accurate()) throw ArgumentError("tableau " + t.name + " is not stiffly accurate");
  return {t.name, t.a, Matrix(), t.c};
}

StageCoefficients stage_coefficients(const ImexTableau& t) {
  if (!t.implicit.stiffly_accurate()) {
    throw ArgumentError("tableau " + t.name + " is not stiffly accurate");
  }
  return {t.name, t.implicit.a, t.explicit_a, t.c};
}

FactorTriple assemble_w(std::size_t k, const StageWorkspace& ws, double dt,
                        const StageCoefficients& co) {
  if (k == 0 || k > co.stages()) throw ArgumentError("assemble_w: stage index out of range");
  std::vector<double> coef = {1.0};
  std::vector<FactorTriple> terms = {to_triple(ws.u_n)};
  for (std::size_t l = 1; l < k && l <= ws.y.size(); ++l) {
    coef.push_back(dt * co.a(k - 1, l - 1));
    terms.push_back(ws.y[l - 1]);
  }
  for (std::size_t l = 1; l <= k && l <= ws.phi.size(); ++l) {
    coef.push_back(dt * co.a(k - 1, l - 1));
    terms.push_back(ws.phi[l - 1]);
  }
  if (co.imex()) {
    for (std::size_t l = 1; l <= k && l <= ws.y_explicit.size(); ++l) {
      coef.push_back(dt * co.explicit_a(k, l - 1));
      terms.push_back(ws.y_explicit[l - 1]);
    }
  }
  return combine(coef, terms);
}

FactorTriple implicit_increment(const Matrix& fx, const Matrix& fy, const LowRankState& u) {
  return {hcat({matmul(fx, u.vx), u.vx}), block_diag({u.s, u.s}), hcat({u.vy, matmul(fy, u.vy)})};
}

LowRankState backward_euler_step(const LowRankState& state, const ProblemOperators& ops, double t,
                                 double dt, const StepConfig& cfg, SchurCache* cache) {
  require_implicit_only(ops, "backward_euler_step");
  return run_stages(state, ops, t, dt, stage_coefficients(backward_euler_tableau()), cfg, cache);
}

LowRankState dirk_step(const LowRankState& state, const ProblemOperators& ops, double t, double dt,
                       const ButcherTableau& tableau, const StepConfig& cfg, SchurCache* cache) {
  require_implicit_only(ops, "dirk_step");
  return run_stages(state, ops, t, dt, stage_coefficients(tableau), cfg, cache);
}

LowRankState imex_step(const LowRankState& state, const ProblemOperators& ops, double t, double dt,
                       const ImexTableau& tableau, const StepConfig& cfg, SchurCache* cache) {
  return run_stages(state, ops, t, dt, stage_coefficients(tableau), cfg, cache);
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::be: return "be";
    case Scheme::dirk2: return "dirk2";
    case Scheme::dirk3: return "dirk3";
    case Scheme::imex111: return "imex111";
    case Scheme::imex222: return "imex222";
    case Scheme::imex443: return "imex443";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::be, Scheme::dirk2, Scheme::dirk3, Scheme::imex111, Scheme::imex222,
                   Scheme::imex443}) {
    if (scheme_name(s) == name) return s;
  }
  throw ArgumentError("unknown scheme '" + name + "'");
}

bool is_imex(Scheme s) {
  return s == Scheme::imex111 || s == Scheme::imex222 || s == Scheme::imex443;
}

int scheme_order(Scheme s) {
  switch (s) {
    case Scheme::be:
    case Scheme::imex111: return 1;
    case Scheme::dirk2:
    case Scheme::imex222: return 2;
    case Scheme::dirk3:
    case Scheme::imex443: return 3;
  }
  return 0;
}

namespace {

StageCoefficients coefficients_for(Scheme s) {
  switch (s) {
    case Scheme::be: return stage_coefficients(backward_euler_tableau());
    case Scheme::dirk2: return stage_coefficients(dirk2_tableau());
    case Scheme::dirk3: return stage_coefficients(dirk3_tableau());
    case Scheme::imex111: return stage_coefficients(imex111_tableau());
    case Scheme::imex222: return stage_coefficients(imex222_tableau());
    case Scheme::imex443: return stage_coefficients(imex443_tableau());
  }
  throw ArgumentError("unknown scheme");
}

}  // namespace

Stepper::Stepper(ProblemOperators ops, Scheme scheme, StepConfig cfg, std::size_t cache_capacity)
    : ops_(std::move(ops)),
      scheme_(scheme),
      coeffs_(coefficients_for(scheme)),
      cfg_(std::move(cfg)),
      cache_(cache_capacity) {
  if (!is_imex(scheme_)) require_implicit_only(ops_, scheme_name(scheme_).c_str());
}

LowRankState Stepper::step(const LowRankState& state, double t, double dt) {
  return run_stages(state, ops_, t, dt, coeffs_, cfg_, &cache_);
}

}  // namespace rail
