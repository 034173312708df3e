#pragma once

// Run configuration: spec defaults, overridden by a key=value file, overridden
// by command-line values.

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "rail/integrator.hpp"
#include "rail/problems.hpp"

namespace rail {

/// Where convergence errors are measured against. `automatic` picks the exact
/// solution when the problem has one and a fine run otherwise.
struct ReferenceSpec {
  enum class Kind { automatic, exact, fine, none };
  Kind kind = Kind::automatic;
  // Fine-run descriptor; unset fields derive from the coarse run.
  std::optional<Scheme> scheme;
  std::optional<std::size_t> n;
  std::optional<double> lambda;
  std::optional<double> eps;
  std::optional<std::size_t> r0;
};

struct RunConfig {
  std::string problem = "diffusion";
  Scheme scheme = Scheme::dirk2;
  std::size_t n = 100;
  /// Exactly one of lambda (dt = lambda * dx) and dt is set.
  std::optional<double> lambda;
  std::optional<double> dt;
  double t_final = 0.5;
  double eps = 1e-8;
  std::size_t r0 = 20;
  TruncationKind truncation = TruncationKind::svd;
  WeightKind weight = WeightKind::uniform;
  double weight_delta = 5e-9;
  std::string output;
  ReferenceSpec reference;
  /// Directory for cached fine-run references; empty disables caching.
  std::string cache_dir;
};

using ConfigValues = std::map<std::string, std::string>;

/// Defaults of the named problem. Throws ConfigError for unknown problems.
RunConfig default_config(const std::string& problem);

/// Applies one key=value pair. Throws ConfigError for unknown keys or values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines; `#` starts a comment. Throws ConfigError with
/// the line number on malformed input and IoError if the file cannot be read.
ConfigValues read_config_file(const std::string& path);

/// defaults(problem) <- file values <- command-line values. The problem is
/// taken from the highest layer that names one.
RunConfig resolve_config(const ConfigValues& file, const ConfigValues& cli);

/// Checks invariants (positive sizes, even n, scheme/problem compatibility).
void validate(const RunConfig& cfg);

/// Nominal step for the configured grid.
double nominal_dt(const RunConfig& cfg);

ReferenceSpec parse_reference(const std::string& text);
std::string describe(const ReferenceSpec& ref);
std::string truncation_name(TruncationKind k);
std::string weight_name(WeightKind k);

/// Canonical key=value rendering, stable across runs (used for cache keys).
std::string canonical_string(const RunConfig& cfg);

}  // namespace rail
