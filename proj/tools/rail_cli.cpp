// Command-line runner: single simulations, convergence studies and the
// problem catalogue. Exit codes: 0 success, 1 I/O failure, 2 configuration
// error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rail/config.hpp"
#include "rail/csv.hpp"
#include "rail/errors.hpp"
#include "rail/problems.hpp"
#include "rail/simulation.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigFlag {
  const char* key;
  const char* flag;
  const char* help;
};

constexpr ConfigFlag kConfigFlags[] = {
    {"problem", "--problem", "benchmark name (see list-problems)"},
    {"scheme", "--scheme", "be | dirk2 | dirk3 | imex111 | imex222 | imex443"},
    {"n", "--n", "grid points per dimension (even)"},
    {"lambda", "--lambda", "dt = lambda * dx"},
    {"dt", "--dt", "absolute time step (replaces lambda)"},
    {"t_final", "--t-final", "final time"},
    {"eps", "--eps", "truncation tolerance"},
    {"r0", "--r0", "initial rank after padding"},
    {"truncation", "--truncation", "svd | conservative"},
    {"weight", "--weight", "uniform | maxwellian | maxwellian(delta)"},
    {"weight_delta", "--weight-delta", "robustness shift of the Maxwellian weight"},
    {"output", "--output", "CSV output path (relative paths go under $RAIL_OUTPUT_DIR)"},
    {"reference", "--reference", "auto | exact | none | fine[:scheme=..,n=..,lambda=..,eps=..,r0=..]"},
    {"cache_dir", "--cache-dir", "directory for cached fine references"},
};

struct Options {
  std::string config_file;
  std::vector<std::string> values = std::vector<std::string>(std::size(kConfigFlags));
  std::vector<CLI::Option*> opts;
};

void add_config_options(CLI::App& cmd, Options& o) {
  cmd.add_option("-c,--config", o.config_file, "key = value configuration file");
  for (std::size_t i = 0; i < std::size(kConfigFlags); ++i) {
    o.opts.push_back(cmd.add_option(kConfigFlags[i].flag, o.values[i], kConfigFlags[i].help));
  }
}

std::filesystem::path output_root() {
  const char* env = std::getenv("RAIL_OUTPUT_DIR");
  return env != nullptr && *env != '\0' ? std::filesystem::path(env) : std::filesystem::path();
}

std::string resolve_output(const std::string& path) {
  if (path.empty() || path == "-") return path;
  std::filesystem::path p(path);
  if (p.is_relative() && !output_root().empty()) p = output_root() / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p.string();
}

rail::RunConfig build_config(const Options& o) {
  rail::ConfigValues file;
  if (!o.config_file.empty()) file = rail::read_config_file(o.config_file);
  rail::ConfigValues cli;
  for (std::size_t i = 0; i < std::size(kConfigFlags); ++i) {
    if (o.opts[i]->count() > 0) cli[kConfigFlags[i].key] = o.values[i];
  }
  rail::RunConfig cfg = rail::resolve_config(file, cli);
  if (cfg.cache_dir.empty()) {
    const auto root = output_root();
    cfg.cache_dir = ((root.empty() ? std::filesystem::path(".") : root) / ".rail-cache").string();
  }
  cfg.output = resolve_output(cfg.output);
  return cfg;
}

void summarize(const rail::RunConfig& cfg) {
  std::cerr << rail::canonical_string(cfg) << '\n';
}

int cmd_run(const Options& o) {
  const rail::RunConfig cfg = build_config(o);
  summarize(cfg);
  const rail::SimulationResult r = rail::run_simulation(cfg);
  if (cfg.output.empty() || cfg.output == "-") {
    rail::write_records(std::cout, r.records);
  } else {
    rail::emit_csv(r.records, cfg.output);
  }
  const rail::StepRecord& last = r.records.back();
  std::fprintf(stderr, "steps=%zu dt=%.6g final_rank=%zu rel_mass_dev=%.3e\n", r.steps, r.dt,
               last.rank, last.rel_mass_dev);
  return 0;
}

int cmd_converge(const Options& o, const std::vector<double>& lambdas, bool serial) {
  const rail::RunConfig cfg = build_config(o);
  summarize(cfg);
  const rail::ConvergenceTable t = rail::run_convergence_study(cfg, lambdas, !serial);
  if (cfg.output.empty() || cfg.output == "-") {
    rail::write_convergence(std::cout, t);
  } else {
    rail::emit_convergence_csv(t, cfg.output);
  }
  std::fprintf(stderr, "reference=%s slope=%.4f\n", t.reference.c_str(), t.slope);
  return 0;
}

int cmd_list() {
  for (const auto& spec : rail::benchmarks()) {
    const auto& d = spec.defaults;
    std::printf("%-20s %s\n", spec.name.c_str(), spec.description.c_str());
    std::printf("%-20s n=%zu lambda=%g eps=%g r0=%zu t_final=%g scheme=%s truncation=%s weight=%s\n",
                "", d.n, d.lambda, d.eps, d.r0, d.t_final, rail::scheme_name(d.scheme).c_str(),
                rail::truncation_name(d.truncation).c_str(), rail::weight_name(d.weight).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit low-rank integrator for 2D advection-diffusion benchmarks"};
  app.require_subcommand(1);

  Options run_opts;
  CLI::App* run = app.add_subcommand("run", "run one simulation and write per-step records");
  add_config_options(*run, run_opts);

  Options conv_opts;
  std::vector<double> lambdas;
  bool serial = false;
  CLI::App* conv = app.add_subcommand("converge", "temporal convergence study over lambda");
  add_config_options(*conv, conv_opts);
  conv->add_option("--lambdas", lambdas, "comma-separated lambda values")
      ->delimiter(',')
      ->required();
  conv->add_flag("--serial", serial, "run the lambda values one after another");

  CLI::App* list = app.add_subcommand("list-problems", "show the available benchmarks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*conv) return cmd_converge(conv_opts, lambdas, serial);
    if (*list) return cmd_list();
  } catch (const rail::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rail::ArgumentError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rail::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const rail::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
