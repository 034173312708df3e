#include "rail/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>

#include "rail/errors.hpp"
#include "rail/integrator.hpp"
#include "rail/problems.hpp"

namespace rail {

namespace {

constexpr double kBlowupFactor = 1e6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------- reference cache

constexpr char kCacheMagic[8] = {'R', 'A', 'I', 'L', 'R', 'E', 'F', '1'};

void write_matrix(std::ofstream& out, const Matrix& m) {
  const std::uint64_t dims[2] = {m.rows(), m.cols()};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.values().size() * sizeof(double)));
}

bool read_matrix(std::ifstream& in, Matrix& m) {
  std::uint64_t dims[2] = {0, 0};
  if (!in.read(reinterpret_cast<char*>(dims), sizeof dims)) return false;
  if (dims[0] > (1u << 20) || dims[1] > (1u << 20)) return false;
  m = Matrix(dims[0], dims[1]);
  return static_cast<bool>(in.read(reinterpret_cast<char*>(m.data()),
                                   static_cast<std::streamsize>(m.values().size() * sizeof(double))));
}

std::optional<LowRankState> load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kCacheMagic)) {
    return std::nullopt;
  }
  LowRankState s;
  if (!read_matrix(in, s.vx) || !read_matrix(in, s.s) || !read_matrix(in, s.vy)) {
    return std::nullopt;
  }
  return s;
}

void store_state(const std::filesystem::path& path, const LowRankState& s) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write reference cache '" + tmp.string() + "'");
    out.write(kCacheMagic, sizeof kCacheMagic);
    write_matrix(out, s.vx);
    write_matrix(out, s.s);
    write_matrix(out, s.vy);
    if (!out) throw IoError("failed writing reference cache '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move reference cache into '" + path.string() + "'");
}

RunConfig fine_config(const RunConfig& cfg, const BenchmarkSpec& spec) {
  const ReferenceSpec& ref = cfg.reference;
  RunConfig fine = cfg;
  const bool implicit_only = !spec.has_flow() && !spec.has_source();
  fine.scheme = ref.scheme.value_or(implicit_only ? Scheme::dirk3 : Scheme::imex443);
  fine.n = ref.n.value_or(cfg.n);
  fine.lambda = ref.lambda.value_or(0.05);
  fine.dt.reset();
  fine.eps = ref.eps.value_or(cfg.eps * 1e-2);
  fine.r0 = ref.r0.value_or(std::min(fine.n, cfg.r0 * fine.n / cfg.n));
  fine.reference = {};
  fine.output.clear();
  return fine;
}

// Dense reference on the coarse grid.
Matrix fine_reference(const RunConfig& cfg, const BenchmarkSpec& spec) {
  const RunConfig fine = fine_config(cfg, spec);
  if (fine.n % cfg.n != 0) {
    throw ConfigError("reference grid n=" + std::to_string(fine.n) +
                      " is not a multiple of n=" + std::to_string(cfg.n));
  }
  std::optional<LowRankState> state;
  std::filesystem::path cache_file;
  if (!cfg.cache_dir.empty()) {
    char name[40];
    std::snprintf(name, sizeof name, "ref-%016llx.bin",
                  static_cast<unsigned long long>(fnv1a(canonical_string(fine))));
    cache_file = std::filesystem::path(cfg.cache_dir) / name;
    state = load_state(cache_file);
  }
  if (!state) {
    state = run_simulation(fine).final_state;
    if (!cache_file.empty()) store_state(cache_file, *state);
  }
  const std::size_t stride = fine.n / cfg.n;
  Matrix vx(cfg.n, state->rank()), vy(cfg.n, state->rank());
  for (std::size_t j = 0; j < state->rank(); ++j) {
    for (std::size_t i = 0; i < cfg.n; ++i) {
      vx(i, j) = state->vx(i * stride, j);
      vy(i, j) = state->vy(i * stride, j);
    }
  }
  return matmul_nt(matmul(vx, state->s), vy);
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t step_count(double t_final, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("step_count: dt must be positive");
  if (t_final <= 0.0) return 0;
  const double ratio = t_final / dt;
  const double full = std::floor(ratio * (1.0 + 1e-12));
  return static_cast<std::size_t>(full) + (ratio - full > 1e-9 ? 1 : 0);
}

SimulationResult run_simulation(const RunConfig& cfg,
                                const std::function<void(const StepRecord&)>& observer) {
  validate(cfg);
  const BenchmarkSpec& spec = find_benchmark(cfg.problem);
  Grid2D grid = benchmark_grid(spec, cfg.n);
  const LowRankState exact_rank = spec.initial(grid);
  LowRankState u = pad_rank(exact_rank, cfg.r0);

  const double m0 = mass(u, grid);
  const double norm0 = u.s.frobenius_norm();
  const double dt = nominal_dt(cfg);
  const std::size_t steps = step_count(cfg.t_final, dt);

  StepConfig step_cfg;
  step_cfg.truncation.eps = cfg.eps;
  step_cfg.truncation.conservative = cfg.truncation == TruncationKind::conservative;
  step_cfg.truncation.weight = make_weight(cfg.weight, grid, cfg.weight_delta);
  step_cfg.truncation.grid = &grid;
  if (!spec.has_source()) step_cfg.truncation.target_mass = m0;

  const Matrix equilibrium = spec.equilibrium ? spec.equilibrium(grid) : Matrix();

  SimulationResult result;
  result.dt = dt;
  result.steps = steps;
  auto record = [&](std::size_t k, double t, const LowRankState& s, std::size_t rank) {
    StepRecord r;
    r.step = k;
    r.time = t;
    r.rank = rank;
    r.mass = mass(s, grid);
    r.rel_mass_dev = m0 != 0.0 ? (r.mass - m0) / std::fabs(m0) : r.mass;
    if (spec.has_exact()) r.l1_error = l1_error(s, spec.exact(grid, t), grid);
    if (!equilibrium.empty()) r.decay_l1 = l1_error(s, equilibrium, grid);
    result.records.push_back(r);
    if (observer) observer(r);
  };
  record(0, 0.0, u, exact_rank.rank());

  if (steps > 0) {
    Stepper stepper(make_operators(spec, grid, cfg.t_final), cfg.scheme, step_cfg);
    for (std::size_t k = 1; k <= steps; ++k) {
      const double t0 = static_cast<double>(k - 1) * dt;
      const double t1 = k == steps ? cfg.t_final : static_cast<double>(k) * dt;
      u = stepper.step(u, t0, t1 - t0);
      const double norm = u.s.frobenius_norm();
      if (!std::isfinite(norm) || norm > kBlowupFactor * norm0) {
        throw NumericError("unstable run: ||U||_F = " + fmt(norm) + " at step " +
                           std::to_string(k) + " (t = " + fmt(t1) + "), initial " + fmt(norm0) +
                           "; reduce lambda or dt (the explicit part obeys a CFL limit)");
      }
      record(k, t1, u, u.rank());
    }
  }
  result.final_state = std::move(u);
  result.grid = std::move(grid);
  return result;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ArgumentError("loglog_slope: need at least two matching points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ArgumentError("loglog_slope: abscissae coincide");
  return (n * sxy - sx * sy) / denom;
}

ConvergenceTable run_convergence_study(const RunConfig& cfg, const std::vector<double>& lambdas,
                                       bool parallel) {
  validate(cfg);
  if (lambdas.empty()) throw ConfigError("convergence study needs at least one lambda");
  const BenchmarkSpec& spec = find_benchmark(cfg.problem);
  ReferenceSpec::Kind kind = cfg.reference.kind;
  if (kind == ReferenceSpec::Kind::automatic) {
    kind = spec.has_exact() ? ReferenceSpec::Kind::exact : ReferenceSpec::Kind::fine;
  }
  if (kind == ReferenceSpec::Kind::none) {
    throw ConfigError("convergence study needs a reference (exact or fine)");
  }
  if (kind == ReferenceSpec::Kind::exact && !spec.has_exact()) {
    throw ConfigError("problem '" + cfg.problem + "' has no exact solution");
  }

  ConvergenceTable table;
  Matrix reference;
  if (kind == ReferenceSpec::Kind::exact) {
    table.reference = "exact";
  } else {
    table.reference = "fine(" + canonical_string(fine_config(cfg, spec)) + ")";
    reference = fine_reference(cfg, spec);
  }

  auto run_one = [&](double lambda) {
    RunConfig c = cfg;
    c.lambda = lambda;
    c.dt.reset();
    const SimulationResult r = run_simulation(c);
    ConvergenceRow row;
    row.lambda = lambda;
    row.dt = r.dt;
    row.steps = r.steps;
    row.l1_error = reference.empty() ? l1_error(r.final_state, spec.exact(r.grid, c.t_final), r.grid)
                                     : l1_error(r.final_state, reference, r.grid);
    return row;
  };

  if (parallel) {
    std::vector<std::future<ConvergenceRow>> jobs;
    for (double lambda : lambdas) jobs.push_back(std::async(std::launch::async, run_one, lambda));
    for (auto& j : jobs) table.rows.push_back(j.get());
  } else {
    for (double lambda : lambdas) table.rows.push_back(run_one(lambda));
  }

  std::vector<double> dts, errs;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ConvergenceRow& row = table.rows[i];
    if (i > 0) {
      const ConvergenceRow& prev = table.rows[i - 1];
      row.order = std::log(prev.l1_error / row.l1_error) / std::log(prev.dt / row.dt);
    }
    dts.push_back(row.dt);
    errs.push_back(row.l1_error);
  }
  table.slope = table.rows.size() >= 2 ? loglog_slope(dts, errs) : 0.0;
  return table;
}

}  // namespace rail
