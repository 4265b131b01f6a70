#pragma once

#include "boolperc/analysis.hpp"
#include "boolperc/io/json.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace boolperc::io {

inline constexpr int kConfigVersion = 1;

/// Experiment document, e.g.
///   {"version": 1,
///    "law": {"family": "long-short", "d": 2, "m": 1, "alpha": 1.5},
///    "dimension": 2,
///    "grid": {"u": [0.05], "L": [50, 100]},
///    "replicas": 200, "seed": 7,
///    "margin": {"auto": 0.01},
///    "probe_spacing": 0.5, "n_max": 10, "threads": 0,
///    "output_dir": "out"}
/// Unknown keys are errors.
struct ExperimentConfig {
  int version = kConfigVersion;
  GrainLaw law;
  int dimension = 2;
  std::vector<double> u;
  std::vector<double> side;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  MarginPolicy margin = MarginPolicy::automatic(0.01);
  double probe_spacing = 0.1;
  int n_max = 10;
  unsigned threads = 0;
  double max_expected_vertices = 1e7;
  std::optional<std::string> output_dir;

  /// u-major product of the u and L lists.
  SweepPlan plan() const {
    SweepPlan p;
    p.law = law;
    for (double x : u)
      for (double l : side) p.grid.emplace_back(x, l);
    p.replicas = replicas;
    p.root_seed = seed;
    p.margin = margin;
    p.threads = threads;
    p.process.max_expected_vertices = max_expected_vertices;
    return p;
  }
};

inline ExperimentConfig parse_config(const Json& j) {
  const std::string where = "config";
  require_keys(j, {"version", "law", "dimension", "grid", "replicas", "seed", "margin",
                   "probe_spacing", "n_max", "threads", "max_expected_vertices", "output_dir"},
               where);
  ExperimentConfig c;
  c.version = static_cast<int>(integer(field(j, "version", where), "config.version"));
  if (c.version != kConfigVersion)
    throw ConfigError("config: unsupported version " + std::to_string(c.version));
  c.law = law_from_json(field(j, "law", where));
  c.dimension = c.law.dimension();
  if (j.contains("dimension") &&
      integer(j.at("dimension"), "config.dimension") != c.dimension)
    throw ConfigError("config: dimension does not match the law");

  const Json& grid = field(j, "grid", where);
  require_keys(grid, {"u", "L"}, "config.grid");
  c.u = numbers(field(grid, "u", "config.grid"), "config.grid.u");
  c.side = numbers(field(grid, "L", "config.grid"), "config.grid.L");
  if (c.u.empty() || c.side.empty()) throw ConfigError("config.grid: u and L must be non-empty");

  const long long reps = integer(field(j, "replicas", where), "config.replicas");
  if (reps < 1) throw ConfigError("config.replicas: must be >= 1");
  c.replicas = static_cast<std::size_t>(reps);
  const Json& seed = field(j, "seed", where);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    throw ConfigError("config.seed: expected a non-negative integer");
  c.seed = seed.get<std::uint64_t>();

  if (j.contains("margin")) {
    const Json& m = j.at("margin");
    require_keys(m, {"explicit", "auto"}, "config.margin");
    if (m.size() != 1) throw ConfigError("config.margin: give exactly one of 'explicit' or 'auto'");
    if (m.contains("explicit")) c.margin = MarginPolicy::fixed(number(m.at("explicit"), "config.margin.explicit"));
    else c.margin = MarginPolicy::automatic(number(m.at("auto"), "config.margin.auto"));
  }
  if (j.contains("probe_spacing")) c.probe_spacing = number(j.at("probe_spacing"), "config.probe_spacing");
  if (!(c.probe_spacing > 0)) throw ConfigError("config.probe_spacing: must be positive");
  if (j.contains("n_max")) c.n_max = static_cast<int>(integer(j.at("n_max"), "config.n_max"));
  if (c.n_max < 1) throw ConfigError("config.n_max: must be >= 1");
  if (j.contains("threads")) {
    const long long t = integer(j.at("threads"), "config.threads");
    if (t < 0) throw ConfigError("config.threads: must be >= 0");
    c.threads = static_cast<unsigned>(t);
  }
  if (j.contains("max_expected_vertices"))
    c.max_expected_vertices = number(j.at("max_expected_vertices"), "config.max_expected_vertices");
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("config.output_dir: expected a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }

  try {
    c.plan().validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  try {
    return parse_config(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

}  // namespace boolperc::io
