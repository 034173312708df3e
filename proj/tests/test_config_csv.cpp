#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "rail/config.hpp"
#include "rail/csv.hpp"
#include "rail/errors.hpp"
#include "rail/simulation.hpp"

namespace {

using rail::ConfigError;
using rail::ConfigValues;
using rail::RunConfig;

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("rail-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

RunConfig small_diffusion(rail::Scheme scheme, double lambda, double t_final) {
  RunConfig cfg = rail::default_config("diffusion");
  cfg.scheme = scheme;
  cfg.n = 32;
  cfg.lambda = lambda;
  cfg.dt.reset();
  cfg.t_final = t_final;
  cfg.r0 = 8;
  return cfg;
}

std::string records_csv(const std::vector<rail::StepRecord>& records) {
  std::ostringstream out;
  rail::write_records(out, records);
  return out.str();
}

// ---------------------------------------------------------------- config

TEST(Config, DefaultsFollowProblem) {
  const RunConfig d = rail::default_config("diffusion");
  EXPECT_EQ(d.scheme, rail::Scheme::dirk2);
  EXPECT_EQ(d.n, 200u);
  ASSERT_TRUE(d.lambda.has_value());
  EXPECT_FALSE(d.dt.has_value());
  const RunConfig l = rail::default_config("lbfp");
  EXPECT_EQ(l.weight, rail::WeightKind::maxwellian);
  EXPECT_DOUBLE_EQ(l.eps, 1e-6);
  EXPECT_THROW(rail::default_config("nope"), ConfigError);
}

TEST(Config, PrecedenceCliOverFileOverDefaults) {
  const ConfigValues file{{"problem", "swirling"}, {"n", "64"}, {"eps", "1e-7"}};
  const ConfigValues cli{{"n", "32"}};
  const RunConfig cfg = rail::resolve_config(file, cli);
  EXPECT_EQ(cfg.problem, "swirling");
  EXPECT_EQ(cfg.n, 32u);
  EXPECT_DOUBLE_EQ(cfg.eps, 1e-7);
  EXPECT_EQ(cfg.scheme, rail::default_config("swirling").scheme);

  const RunConfig cli_problem = rail::resolve_config(file, {{"problem", "lbfp"}});
  EXPECT_EQ(cli_problem.problem, "lbfp");
  EXPECT_EQ(cli_problem.n, 64u);
}

TEST(Config, LambdaAndDtAreExclusive) {
  RunConfig cfg = rail::default_config("diffusion");
  rail::apply_config_value(cfg, "dt", "0.01");
  EXPECT_FALSE(cfg.lambda.has_value());
  EXPECT_DOUBLE_EQ(rail::nominal_dt(cfg), 0.01);
  rail::apply_config_value(cfg, "lambda", "0.5");
  EXPECT_FALSE(cfg.dt.has_value());
  EXPECT_THROW(rail::resolve_config({{"lambda", "1"}, {"dt", "0.1"}}, {}), ConfigError);
  // A CLI dt replaces a file lambda.
  const RunConfig mixed = rail::resolve_config({{"lambda", "1"}}, {{"dt", "0.1"}});
  EXPECT_TRUE(mixed.dt.has_value());
  EXPECT_FALSE(mixed.lambda.has_value());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  RunConfig cfg = rail::default_config("diffusion");
  EXPECT_THROW(rail::apply_config_value(cfg, "colour", "red"), ConfigError);
  EXPECT_THROW(rail::apply_config_value(cfg, "n", "abc"), ConfigError);
  EXPECT_THROW(rail::apply_config_value(cfg, "scheme", "rk4"), ConfigError);
  EXPECT_THROW(rail::apply_config_value(cfg, "truncation", "maybe"), ConfigError);
  rail::apply_config_value(cfg, "weight", "maxwellian(1e-8)");
  EXPECT_EQ(cfg.weight, rail::WeightKind::maxwellian);
  EXPECT_DOUBLE_EQ(cfg.weight_delta, 1e-8);
}

TEST(Config, ReadsFileWithComments) {
  const auto dir = scratch_dir("cfg");
  const auto path = dir / "run.cfg";
  std::ofstream(path) << "# comment\nproblem = rigid-rotation\n\nn = 48  # trailing\nscheme=imex443\n";
  const ConfigValues v = rail::read_config_file(path.string());
  EXPECT_EQ(v.at("problem"), "rigid-rotation");
  EXPECT_EQ(v.at("n"), "48");
  EXPECT_EQ(v.at("scheme"), "imex443");

  std::ofstream(dir / "dup.cfg") << "n = 4\nn = 8\n";
  try {
    rail::read_config_file((dir / "dup.cfg").string());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  std::ofstream(dir / "bad.cfg") << "just words\n";
  EXPECT_THROW(rail::read_config_file((dir / "bad.cfg").string()), ConfigError);
  EXPECT_THROW(rail::read_config_file((dir / "missing.cfg").string()), rail::IoError);
  std::filesystem::remove_all(dir);
}

TEST(Config, ValidateRules) {
  RunConfig ok = small_diffusion(rail::Scheme::be, 1.0, 0.1);
  EXPECT_NO_THROW(rail::validate(ok));

  RunConfig odd = ok;
  odd.n = 33;
  EXPECT_THROW(rail::validate(odd), ConfigError);
  RunConfig none = ok;
  none.lambda.reset();
  EXPECT_THROW(rail::validate(none), ConfigError);
  RunConfig neg = ok;
  neg.lambda = -1.0;
  EXPECT_THROW(rail::validate(neg), ConfigError);
  RunConfig big_rank = ok;
  big_rank.r0 = 64;
  EXPECT_THROW(rail::validate(big_rank), ConfigError);

  RunConfig advect = rail::default_config("rigid-rotation");
  advect.scheme = rail::Scheme::dirk2;
  EXPECT_THROW(rail::validate(advect), ConfigError);
  RunConfig no_exact = rail::default_config("swirling");
  no_exact.reference.kind = rail::ReferenceSpec::Kind::exact;
  EXPECT_THROW(rail::validate(no_exact), ConfigError);
}

TEST(Config, ReferenceRoundTrip) {
  using Kind = rail::ReferenceSpec::Kind;
  EXPECT_EQ(rail::parse_reference("auto").kind, Kind::automatic);
  EXPECT_EQ(rail::parse_reference("exact").kind, Kind::exact);
  EXPECT_EQ(rail::parse_reference("none").kind, Kind::none);
  const auto fine = rail::parse_reference("fine:scheme=dirk3,n=64,lambda=0.05,eps=1e-10,r0=12");
  EXPECT_EQ(fine.kind, Kind::fine);
  EXPECT_EQ(*fine.scheme, rail::Scheme::dirk3);
  EXPECT_EQ(*fine.n, 64u);
  EXPECT_DOUBLE_EQ(*fine.lambda, 0.05);
  EXPECT_EQ(rail::describe(rail::parse_reference(rail::describe(fine))), rail::describe(fine));
  EXPECT_THROW(rail::parse_reference("fine:colour=1"), ConfigError);
  EXPECT_THROW(rail::parse_reference("coarse"), ConfigError);
}

TEST(Config, CanonicalStringSeparatesConfigs) {
  RunConfig a = small_diffusion(rail::Scheme::be, 1.0, 0.1);
  RunConfig b = a;
  EXPECT_EQ(rail::canonical_string(a), rail::canonical_string(b));
  b.eps = std::nextafter(a.eps, 1.0);
  EXPECT_NE(rail::canonical_string(a), rail::canonical_string(b));
  EXPECT_NE(rail::fnv1a(rail::canonical_string(a)), rail::fnv1a(rail::canonical_string(b)));
}

// ------------------------------------------------------------ simulation

TEST(Simulation, StepCount) {
  EXPECT_EQ(rail::step_count(0.0, 0.1), 0u);
  EXPECT_EQ(rail::step_count(1.0, 0.1), 10u);
  EXPECT_EQ(rail::step_count(1.0, 0.3), 4u);
  EXPECT_EQ(rail::step_count(0.05, 0.1), 1u);
}

TEST(Simulation, ZeroFinalTimeReturnsInitialState) {
  RunConfig cfg = small_diffusion(rail::Scheme::dirk2, 1.0, 0.0);
  const auto res = rail::run_simulation(cfg);
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_EQ(res.records[0].step, 0u);
  EXPECT_EQ(res.records[0].time, 0.0);
  EXPECT_EQ(res.records[0].rel_mass_dev, 0.0);
  EXPECT_EQ(res.steps, 0u);
  const auto spec = rail::find_benchmark("diffusion");
  const auto init = rail::initial_state(spec, res.grid, cfg.r0);
  EXPECT_EQ(rail::distance(res.final_state.dense(), init.dense()), 0.0);
}

TEST(Simulation, DiffusionConservesMass) {
  RunConfig cfg = rail::default_config("diffusion");
  cfg.scheme = rail::Scheme::be;
  cfg.n = 64;
  cfg.lambda = 1.0;
  cfg.t_final = 0.1;
  cfg.truncation = rail::TruncationKind::conservative;
  const auto res = rail::run_simulation(cfg);
  ASSERT_GE(res.records.size(), 2u);
  for (const auto& r : res.records) EXPECT_LE(std::fabs(r.rel_mass_dev), 1e-10) << r.step;
}

TEST(Simulation, RecordsAreMonotoneAndObserved) {
  RunConfig cfg = small_diffusion(rail::Scheme::dirk2, 0.7, 0.3);
  std::size_t seen = 0;
  const auto res = rail::run_simulation(cfg, [&](const rail::StepRecord&) { ++seen; });
  EXPECT_EQ(seen, res.records.size());
  EXPECT_EQ(res.records.size(), res.steps + 1);
  for (std::size_t i = 1; i < res.records.size(); ++i) {
    EXPECT_GT(res.records[i].time, res.records[i - 1].time);
    EXPECT_LE(res.records[i].rank, cfg.n);
  }
  EXPECT_DOUBLE_EQ(res.records.back().time, cfg.t_final);
}

TEST(Simulation, DeterministicCsvBytes) {
  RunConfig cfg = rail::default_config("rigid-rotation");
  cfg.n = 32;
  cfg.r0 = 8;
  cfg.t_final = 0.1;
  const std::string a = records_csv(rail::run_simulation(cfg).records);
  const std::string b = records_csv(rail::run_simulation(cfg).records);
  EXPECT_EQ(a, b);
}

TEST(Simulation, ExactErrorReported) {
  RunConfig cfg = rail::default_config("rigid-rotation");
  cfg.n = 32;
  cfg.r0 = 8;
  cfg.t_final = 0.05;
  const auto res = rail::run_simulation(cfg);
  for (const auto& r : res.records) {
    ASSERT_TRUE(r.l1_error.has_value());
    EXPECT_FALSE(r.decay_l1.has_value());
  }
  EXPECT_LT(*res.records.back().l1_error, 1e-2);
}

TEST(Simulation, LbfpRankRisesThenFalls) {
  // The explicit drift limits lambda to about 0.07 on any grid.
  RunConfig cfg = rail::default_config("lbfp");
  cfg.n = 64;
  cfg.lambda = 0.05;
  cfg.t_final = 3.0;
  cfg.r0 = 16;
  const auto res = rail::run_simulation(cfg);
  std::size_t max_rank = 0;
  for (const auto& r : res.records) {
    max_rank = std::max(max_rank, r.rank);
    ASSERT_TRUE(r.decay_l1.has_value());
    EXPECT_LE(std::fabs(r.rel_mass_dev), 1e-9);
  }
  EXPECT_EQ(res.records.front().rank, 2u);
  EXPECT_GT(max_rank, 2u);
  EXPECT_LT(res.records.back().rank, max_rank);
  EXPECT_LT(*res.records.back().decay_l1, *res.records.front().decay_l1);
}

TEST(Simulation, InstabilityAborts) {
  RunConfig cfg = rail::default_config("lbfp");
  cfg.n = 64;
  cfg.lambda = 2.0;
  cfg.t_final = 15.0;
  cfg.r0 = 8;
  EXPECT_THROW(rail::run_simulation(cfg), rail::NumericError);
}

// ----------------------------------------------------------- convergence

TEST(Convergence, LoglogSlope) {
  EXPECT_NEAR(rail::loglog_slope({1, 2, 4}, {3, 12, 48}), 2.0, 1e-12);
  EXPECT_NEAR(rail::loglog_slope({0.1, 0.2}, {5e-3, 5e-3}), 0.0, 1e-12);
}

TEST(Convergence, Fnv1aKnownValues) {
  EXPECT_EQ(rail::fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(rail::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Convergence, FirstOrderHalvingAgainstExact) {
  RunConfig cfg = rail::default_config("rigid-rotation");
  cfg.scheme = rail::Scheme::imex111;
  cfg.n = 48;
  cfg.r0 = 10;
  cfg.t_final = 0.5;
  cfg.eps = 1e-10;
  const auto table = rail::run_convergence_study(cfg, {0.5, 0.25});
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.reference, "exact");
  const double ratio = table.rows[0].l1_error / table.rows[1].l1_error;
  EXPECT_NEAR(ratio, 2.0, 0.4);
  ASSERT_TRUE(table.rows[1].order.has_value());
  EXPECT_FALSE(table.rows[0].order.has_value());
}

TEST(Convergence, MissingReferenceIsConfigError) {
  RunConfig cfg = small_diffusion(rail::Scheme::be, 1.0, 0.1);
  cfg.reference.kind = rail::ReferenceSpec::Kind::none;
  EXPECT_THROW(rail::run_convergence_study(cfg, {1.0}), ConfigError);
  cfg.reference = rail::parse_reference("fine:n=48");
  EXPECT_THROW(rail::run_convergence_study(cfg, {1.0}), ConfigError);
}

TEST(Convergence, FineReferenceIsCachedAndReused) {
  const auto dir = scratch_dir("cache");
  RunConfig cfg = small_diffusion(rail::Scheme::be, 1.0, 1.0);
  cfg.reference = rail::parse_reference("fine:lambda=0.05");
  cfg.cache_dir = dir.string();
  const auto first = rail::run_convergence_study(cfg, {1.0, 0.5}, false);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    EXPECT_EQ(e.path().filename().string().rfind("ref-", 0), 0u);
  }
  EXPECT_EQ(files, 1u);
  const auto second = rail::run_convergence_study(cfg, {1.0, 0.5}, true);
  ASSERT_EQ(second.rows.size(), first.rows.size());
  for (std::size_t i = 0; i < first.rows.size(); ++i)
    EXPECT_EQ(second.rows[i].l1_error, first.rows[i].l1_error);
  EXPECT_GT(first.rows[0].l1_error, first.rows[1].l1_error);
  std::filesystem::remove_all(dir);
}

// ------------------------------------------------------------------- csv

TEST(Csv, SingleRecordHasTwoLinesAndEmptyOptionals) {
  rail::StepRecord r;
  r.step = 3;
  r.time = 0.1;
  r.rank = 7;
  r.mass = 1.5;
  r.rel_mass_dev = -2e-16;
  const std::string text = records_csv({r});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.substr(0, text.find('\n')), rail::kRecordHeader);
  const std::string row = text.substr(text.find('\n') + 1);
  EXPECT_EQ(row.substr(row.size() - 3), ",,\n");
}

TEST(Csv, ParseBackIsBitIdentical) {
  std::vector<rail::StepRecord> recs(3);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    recs[i].step = i;
    recs[i].time = 0.1 * static_cast<double>(i) + 1.0 / 3.0;
    recs[i].rank = 2 + i;
    recs[i].mass = std::acos(-1.0) * (1.0 + 1e-15 * static_cast<double>(i));
    recs[i].rel_mass_dev = std::ldexp(1.0, -52 - static_cast<int>(i));
  }
  recs[1].l1_error = 1.0 / 7.0;
  recs[2].decay_l1 = 5e-324;
  std::istringstream in(records_csv(recs));
  const auto back = rail::read_records(in);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].step, recs[i].step);
    EXPECT_EQ(std::memcmp(&back[i].time, &recs[i].time, sizeof(double)), 0);
    EXPECT_EQ(back[i].rank, recs[i].rank);
    EXPECT_EQ(std::memcmp(&back[i].mass, &recs[i].mass, sizeof(double)), 0);
    EXPECT_EQ(back[i].rel_mass_dev, recs[i].rel_mass_dev);
    EXPECT_EQ(back[i].l1_error, recs[i].l1_error);
    EXPECT_EQ(back[i].decay_l1, recs[i].decay_l1);
  }
}

TEST(Csv, EmitToFileAndFailureNamesPath) {
  const auto dir = scratch_dir("csv");
  rail::StepRecord r;
  r.mass = 1.0;
  const auto path = (dir / "out.csv").string();
  rail::emit_csv({r}, path);
  std::ifstream in(path);
  EXPECT_EQ(rail::read_records(in).size(), 1u);
  const std::string bad = (dir / "no-such-dir" / "out.csv").string();
  try {
    rail::emit_csv({r}, bad);
    FAIL() << "expected IoError";
  } catch (const rail::IoError& e) {
    EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(Csv, ConvergenceTable) {
  rail::ConvergenceTable t;
  t.rows.push_back({1.0, 0.1, 5, 1e-3, std::nullopt});
  t.rows.push_back({0.5, 0.05, 10, 2.5e-4, 2.0});
  std::ostringstream out;
  rail::write_convergence(out, t);
  EXPECT_EQ(out.str(), std::string(rail::kConvergenceHeader) +
                           "\n1,0.10000000000000001,5,0.001,\n"
                           "0.5,0.050000000000000003,10,0.00025000000000000001,2\n");
}

}  // namespace
