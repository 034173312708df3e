#include "rail/config.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rail/errors.hpp"

namespace rail {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

Scheme parse_scheme_value(const std::string& text) {
  try {
    return parse_scheme(trim(text));
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string truncation_name(TruncationKind k) {
  return k == TruncationKind::svd ? "svd" : "conservative";
}

std::string weight_name(WeightKind k) { return k == WeightKind::uniform ? "uniform" : "maxwellian"; }

RunConfig default_config(const std::string& problem) {
  const BenchmarkSpec* spec = nullptr;
  try {
    spec = &find_benchmark(problem);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  RunConfig cfg;
  const BenchmarkDefaults& d = spec->defaults;
  cfg.problem = spec->name;
  cfg.scheme = d.scheme;
  cfg.n = d.n;
  cfg.lambda = d.lambda;
  cfg.t_final = d.t_final;
  cfg.eps = d.eps;
  cfg.r0 = d.r0;
  cfg.truncation = d.truncation;
  cfg.weight = d.weight;
  cfg.weight_delta = d.weight_delta;
  return cfg;
}

ReferenceSpec parse_reference(const std::string& text) {
  const std::string t = trim(text);
  ReferenceSpec ref;
  if (t == "auto") return ref;
  if (t == "exact") {
    ref.kind = ReferenceSpec::Kind::exact;
    return ref;
  }
  if (t == "none") {
    ref.kind = ReferenceSpec::Kind::none;
    return ref;
  }
  if (t.rfind("fine", 0) != 0) throw ConfigError("reference: unknown kind '" + text + "'");
  ref.kind = ReferenceSpec::Kind::fine;
  if (t.size() == 4) return ref;
  if (t[4] != ':') throw ConfigError("reference: expected 'fine:key=value,...'");
  std::stringstream items(t.substr(5));
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("reference: malformed item '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = item.substr(eq + 1);
    if (key == "scheme") {
      ref.scheme = parse_scheme_value(value);
    } else if (key == "n") {
      ref.n = parse_count("reference n", value);
    } else if (key == "lambda") {
      ref.lambda = parse_real("reference lambda", value);
    } else if (key == "eps") {
      ref.eps = parse_real("reference eps", value);
    } else if (key == "r0") {
      ref.r0 = parse_count("reference r0", value);
    } else {
      throw ConfigError("reference: unknown key '" + key + "'");
    }
  }
  return ref;
}

std::string describe(const ReferenceSpec& ref) {
  switch (ref.kind) {
    case ReferenceSpec::Kind::automatic: return "auto";
    case ReferenceSpec::Kind::exact: return "exact";
    case ReferenceSpec::Kind::none: return "none";
    case ReferenceSpec::Kind::fine: break;
  }
  std::string out = "fine";
  std::string sep = ":";
  auto add = [&](const std::string& kv) {
    out += sep + kv;
    sep = ",";
  };
  if (ref.scheme) add("scheme=" + scheme_name(*ref.scheme));
  if (ref.n) add("n=" + std::to_string(*ref.n));
  if (ref.lambda) add("lambda=" + real(*ref.lambda));
  if (ref.eps) add("eps=" + real(*ref.eps));
  if (ref.r0) add("r0=" + std::to_string(*ref.r0));
  return out;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    const std::string p = trim(value);
    try {
      find_benchmark(p);
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
    cfg.problem = p;
  } else if (key == "scheme") {
    cfg.scheme = parse_scheme_value(value);
  } else if (key == "n") {
    cfg.n = parse_count(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_real(key, value);
    cfg.dt.reset();
  } else if (key == "dt") {
    cfg.dt = parse_real(key, value);
    cfg.lambda.reset();
  } else if (key == "t_final") {
    cfg.t_final = parse_real(key, value);
  } else if (key == "eps") {
    cfg.eps = parse_real(key, value);
  } else if (key == "r0") {
    cfg.r0 = parse_count(key, value);
  } else if (key == "truncation") {
    const std::string v = trim(value);
    if (v == "svd") {
      cfg.truncation = TruncationKind::svd;
    } else if (v == "conservative") {
      cfg.truncation = TruncationKind::conservative;
    } else {
      throw ConfigError("truncation: expected svd or conservative, got '" + value + "'");
    }
  } else if (key == "weight") {
    const std::string v = trim(value);
    if (v == "uniform") {
      cfg.weight = WeightKind::uniform;
    } else if (v == "maxwellian") {
      cfg.weight = WeightKind::maxwellian;
    } else if (v.rfind("maxwellian(", 0) == 0 && v.back() == ')') {
      cfg.weight = WeightKind::maxwellian;
      cfg.weight_delta = parse_real("weight", v.substr(11, v.size() - 12));
    } else {
      throw ConfigError("weight: expected uniform or maxwellian(delta), got '" + value + "'");
    }
  } else if (key == "weight_delta") {
    cfg.weight_delta = parse_real(key, value);
  } else if (key == "output") {
    cfg.output = trim(value);
  } else if (key == "reference") {
    cfg.reference = parse_reference(value);
  } else if (key == "cache_dir") {
    cfg.cache_dir = trim(value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

ConfigValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  ConfigValues values;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (values.count(key) != 0) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

RunConfig resolve_config(const ConfigValues& file, const ConfigValues& cli) {
  std::string problem = "diffusion";
  if (auto it = file.find("problem"); it != file.end()) problem = trim(it->second);
  if (auto it = cli.find("problem"); it != cli.end()) problem = trim(it->second);
  RunConfig cfg = default_config(problem);
  for (const ConfigValues* layer : {&file, &cli}) {
    if (layer->count("lambda") != 0 && layer->count("dt") != 0) {
      throw ConfigError("set either lambda or dt, not both");
    }
    for (const auto& [key, value] : *layer) {
      if (key != "problem") apply_config_value(cfg, key, value);
    }
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  const BenchmarkSpec* spec = nullptr;
  try {
    spec = &find_benchmark(cfg.problem);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.n < 4 || cfg.n % 2 != 0) throw ConfigError("n must be even and at least 4");
  if (cfg.lambda.has_value() == cfg.dt.has_value()) {
    throw ConfigError("exactly one of lambda and dt must be set");
  }
  const double step = cfg.lambda ? *cfg.lambda : *cfg.dt;
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("lambda/dt must be positive");
  if (!(cfg.t_final >= 0.0) || !std::isfinite(cfg.t_final)) {
    throw ConfigError("t_final must be non-negative");
  }
  if (!(cfg.eps >= 0.0)) throw ConfigError("eps must be non-negative");
  if (cfg.r0 == 0 || cfg.r0 > cfg.n) throw ConfigError("r0 must lie in [1, n]");
  if (!(cfg.weight_delta > 0.0)) throw ConfigError("weight delta must be positive");
  if ((spec->has_flow() || spec->has_source()) && !is_imex(cfg.scheme)) {
    throw ConfigError("problem '" + cfg.problem + "' has advection or a source; scheme '" +
                      scheme_name(cfg.scheme) + "' is implicit only, use an imex scheme");
  }
  if (cfg.reference.kind == ReferenceSpec::Kind::exact && !spec->has_exact()) {
    throw ConfigError("problem '" + cfg.problem + "' has no exact solution");
  }
  if (cfg.reference.scheme && (spec->has_flow() || spec->has_source()) &&
      !is_imex(*cfg.reference.scheme)) {
    throw ConfigError("reference scheme must be an imex scheme for this problem");
  }
}

double nominal_dt(const RunConfig& cfg) {
  if (cfg.dt) return *cfg.dt;
  const BenchmarkSpec& spec = find_benchmark(cfg.problem);
  return *cfg.lambda * (spec.right - spec.left) / static_cast<double>(cfg.n);
}

std::string canonical_string(const RunConfig& cfg) {
  std::string s = "problem=" + cfg.problem + ";scheme=" + scheme_name(cfg.scheme) +
                  ";n=" + std::to_string(cfg.n);
  s += cfg.lambda ? ";lambda=" + real(*cfg.lambda) : ";dt=" + real(*cfg.dt);
  s += ";t_final=" + real(cfg.t_final) + ";eps=" + real(cfg.eps) + ";r0=" + std::to_string(cfg.r0);
  s += ";truncation=" + truncation_name(cfg.truncation) + ";weight=" + weight_name(cfg.weight);
  if (cfg.weight == WeightKind::maxwellian) s += ";weight_delta=" + real(cfg.weight_delta);
  return s;
}

}  // namespace rail
