#include "rail/errors.hpp"
#include "rail/problems.hpp"

namespace rail {

FactorTriple explicit_flux_divergence(const LowRankState& state,
                                      const std::vector<RankOneFlow>& flows, const DiffOps& dx,
                                      const DiffOps& dy, double t) {
  if (flows.size() != 2) throw ArgumentError("explicit_flux_divergence: need two flow components");
  const RankOneFlow& a1 = flows[0];
  const RankOneFlow& a2 = flows[1];
  if (a1.ax.size() != state.vx.rows() || a2.ax.size() != state.vx.rows() ||
      a1.ay.size() != state.vy.rows() || a2.ay.size() != state.vy.rows()) {
    throw ArgumentError("explicit_flux_divergence: flow samples do not match the state");
  }
  const double t1 = a1.at ? a1.at(t) : 1.0;
  const double t2 = a2.at ? a2.at(t) : 1.0;
  Matrix x1 = matmul(dx.d1, scale_rows(a1.ax, state.vx));
  Matrix y1 = scale_rows(a1.ay, state.vy);
  Matrix x2 = scale_rows(a2.ax, state.vx);
  Matrix y2 = matmul(dy.d1, scale_rows(a2.ay, state.vy));
  return {hcat({x1, x2}), block_diag({-t1 * state.s, -t2 * state.s}), hcat({y1, y2})};
}

}  // namespace rail
