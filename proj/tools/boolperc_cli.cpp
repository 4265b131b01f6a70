// boolperc: experiment driver for the Poisson Boolean model.
//
//   boolperc classify --family long-short --d 2 --m 1 --alpha 1.5
//   boolperc regime-table --family all
//   boolperc percolate --config sweep.json --out results/
//
// Exit codes: 0 ok, 1 other failure, 2 config or input error, 3 resource
// cap, 4 run tainted by GJK failures.

#include "boolperc/boolperc.hpp"
#include "boolperc/io/config.hpp"
#include "boolperc/io/json.hpp"
#include "boolperc/io/svg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace boolperc;
namespace fs = std::filesystem;

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitTainted = 4;

struct Options {
  std::string config;
  std::string out;
  int threads = -1;
  bool svg = false;

  // classify
  std::string family;
  int d = 0;
  int m = -1;
  std::optional<double> alpha;
  std::vector<double> beta;
  std::vector<double> alpha_vec;
  std::string vol_l1 = "unknown";
  std::string vol_l2 = "unknown";
  std::string diam_ld = "unknown";
  bool table = false;

  // diam
  std::string body_file;
  std::string body_json;

  // sample / pathcount
  std::size_t point = 0;
  std::size_t replica = 0;
  bool palm = false;
  std::string sample_file;
  int n_max = 0;

  // percolate
  bool clusters = false;
  bool largest_fraction = false;
};

/// --out, then the config's output_dir, then $BOOLPERC_OUT_DIR; empty
/// means stdout.
std::string output_dir(const Options& o, const std::optional<std::string>& from_config) {
  if (!o.out.empty()) return o.out;
  if (from_config) return *from_config;
  if (const char* env = std::getenv("BOOLPERC_OUT_DIR"); env && *env) return env;
  return {};
}

void emit(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(dir);
  std::ofstream f(fs::path(dir) / name, std::ios::binary);
  if (!f) throw Error("cannot write '" + (fs::path(dir) / name).string() + "'");
  f << content;
}

template <class Row>
std::string csv(const std::string& header, const std::vector<Row>& rows) {
  std::string s = header + "\n";
  for (const auto& r : rows) s += to_csv(r) + "\n";
  return s;
}

bool gjk_tainted(const std::vector<EstimateRow>& rows) {
  for (const auto& r : rows)
    if (r.taint.find("gjk") != std::string::npos) return true;
  return false;
}

io::ExperimentConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  io::ExperimentConfig c = io::load_config(o.config);
  if (o.threads >= 0) c.threads = static_cast<unsigned>(o.threads);
  return c;
}

Flag parse_flag(const std::string& s, const char* name) {
  if (s == "true") return Flag::True;
  if (s == "false") return Flag::False;
  if (s == "unknown") return Flag::Unknown;
  throw ConfigError(std::string("--") + name + " must be true, false or unknown");
}

GrainLaw law_from_flags(const Options& o) {
  GrainLaw law;
  if (o.family == "long-short") {
    if (o.d == 0 || o.m < 0 || !o.alpha) throw ConfigError("long-short needs --d, --m and --alpha");
    law.family = LongShortEllipsoid{o.d, o.m, *o.alpha};
  } else if (o.family == "independent-axes" || o.family == "dependent-axes") {
    if (o.beta.empty()) throw ConfigError(o.family + " needs --beta");
    const int d = static_cast<int>(o.beta.size());
    if (o.d != 0 && o.d != d) throw ConfigError("--d does not match the length of --beta");
    if (o.family == "independent-axes") law.family = IndependentAxesEllipsoid{d, o.beta};
    else law.family = DependentAxesEllipsoid{d, o.beta};
  } else if (o.family == "right-triangle") {
    if (!o.alpha || o.beta.size() != 1) throw ConfigError("right-triangle needs --alpha and one --beta");
    law.family = RightTriangle{*o.alpha, o.beta[0]};
  } else {
    throw ConfigError("unknown family '" + o.family + "'");
  }
  try {
    law.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return law;
}

int cmd_classify(const Options& o) {
  TailProfile profile;
  std::optional<GrainLaw> law;
  if (!o.alpha_vec.empty()) {
    profile.d = o.d != 0 ? o.d : static_cast<int>(o.alpha_vec.size());
    profile.alpha = o.alpha_vec;
    profile.vol_l1 = parse_flag(o.vol_l1, "vol-l1");
    profile.vol_l2 = parse_flag(o.vol_l2, "vol-l2");
    profile.diam_ld = parse_flag(o.diam_ld, "diam-ld");
    try {
      profile.validate();
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  } else if (!o.family.empty()) {
    law = law_from_flags(o);
  } else if (!o.config.empty()) {
    law = load(o).law;
  } else {
    throw ConfigError("classify needs --family, --alpha-vec or --config");
  }
  if (law) profile = theoretical_tail_profile(*law);

  const Verdict v = classify(profile);
  std::string reasons;
  for (const auto& r : v.reasons) reasons += (reasons.empty() ? "" : " ") + r;
  std::cout << summary(v) << "\n" << "reasons: " << (reasons.empty() ? "none" : reasons) << "\n";
  if (o.table && law) {
    const std::string name = law->name();
    if (name == "fixed") throw ConfigError("no regime table for fixed bodies");
    std::cout << csv(regime_csv_header(), regime_table(regimes::by_name(name)));
  }
  return 0;
}

int cmd_regime_table(const Options& o) {
  const std::string family = o.family.empty() ? "all" : o.family;
  std::vector<RegimePoint> grid;
  try {
    grid = regimes::by_name(family);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  emit(output_dir(o, std::nullopt), "regime_table.csv", csv(regime_csv_header(), regime_table(grid)));
  return 0;
}

int cmd_diam(const Options& o) {
  io::Json j;
  if (!o.body_file.empty()) j = io::read_json_file(o.body_file);
  else if (!o.body_json.empty()) j = io::Json::parse(o.body_json);
  else throw ConfigError("diam needs --body or --body-json");
  const AnyBody body = io::body_from_json(j);
  std::string out = "k,value,direction\n";
  std::visit(
      [&](const auto& b) {
        const auto ds = diameter_sequence(b);
        for (Eigen::Index k = 0; k < ds.values.size(); ++k) {
          out += std::to_string(k + 1) + "," + format_number(ds.values(k)) + ",";
          for (Eigen::Index i = 0; i < ds.directions.rows(); ++i)
            out += (i ? " " : "") + format_number(ds.directions(i, k) == 0.0 ? 0.0 : ds.directions(i, k));
          out += "\n";
        }
      },
      body);
  emit(output_dir(o, std::nullopt), "diam.csv", out);
  return 0;
}

int cmd_sample(const Options& o) {
  const auto c = load(o);
  const SweepPlan plan = c.plan();
  if (o.point >= plan.grid.size()) throw ConfigError("--point out of range");
  if (o.replica >= plan.replicas) throw ConfigError("--replica out of range");
  const auto [u, side] = plan.grid[o.point];
  const Window w = resolve_window(plan, side).window;
  return dispatch_dimension(plan.dimension(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    const Provenance prov{plan.root_seed, o.replica, o.point};
    BooleanSample<D> s = sample_process<D>(w, u, plan.law, prov, plan.process);
    if (o.palm) {
      CounterRng extra = CounterRng(prov.root_seed, prov.replica, prov.stream).split(1);
      add_palm_grain(s, plan.law, extra);
    }
    emit(output_dir(o, c.output_dir), "sample.json", io::to_json(s).dump(1) + "\n");
    std::cerr << "digest " << io::hex64(digest(s)) << " vertices " << s.vertices.size() << "\n";
    return 0;
  });
}

int cmd_percolate(const Options& o) {
  const auto c = load(o);
  const SweepPlan plan = c.plan();
  const std::string dir = output_dir(o, c.output_dir);
  return dispatch_dimension(plan.dimension(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    const PercolationResult res = percolation_sweep<D>(plan);
    std::vector<EstimateRow> rows;
    for (const auto& r : res.rows)
      if (r.stat == "crossing" || o.largest_fraction) rows.push_back(r);
    emit(dir, "percolate.csv", csv(estimate_csv_header(), rows));
    if (o.clusters) {
      if (dir.empty()) throw ConfigError("--clusters needs an output directory");
      emit(dir, "clusters.csv", csv(cluster_csv_header(), res.replicas));
    }
    if (o.svg && !dir.empty()) emit(dir, "percolate.svg", io::svg_plot(rows, "crossing"));
    return gjk_tainted(rows) ? kExitTainted : 0;
  });
}

int cmd_coverage(const Options& o) {
  const auto c = load(o);
  const SweepPlan plan = c.plan();
  const std::string dir = output_dir(o, c.output_dir);
  return dispatch_dimension(plan.dimension(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    const auto rows = coverage_curve<D>(plan, c.probe_spacing);
    emit(dir, "coverage.csv", csv(estimate_csv_header(), rows));
    if (o.svg && !dir.empty()) emit(dir, "coverage.svg", io::svg_plot(rows, "covered_fraction"));
    return 0;
  });
}

/// Expected grain volume of a law with a bounded deterministic shape.
std::optional<double> fixed_volume(const GrainLaw& law) {
  const auto* f = std::get_if<FixedBody>(&law.family);
  if (!f) return std::nullopt;
  try {
    return std::visit([](const auto& b) { return volume(b); }, f->body);
  } catch (const UnsupportedError&) {
    return std::nullopt;
  }
}

int cmd_m0(const Options& o) {
  const auto c = load(o);
  const SweepPlan plan = c.plan();
  const std::string dir = output_dir(o, c.output_dir);
  return dispatch_dimension(plan.dimension(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    M0Result res = m0_sweep<D>(plan);
    std::vector<EstimateRow> rows;
    const auto vol = fixed_volume(plan.law);
    for (std::size_t i = 0; i < plan.grid.size(); ++i) {
      rows.push_back(res.rows[2 * i]);
      rows.push_back(res.rows[2 * i + 1]);
      if (vol) {
        // Goodness of fit of M0 against Poisson(u Vol).
        const double mean = plan.grid[i].first * *vol;
        const GoodnessOfFit g = poisson_gof(res.m0[i], mean);
        rows.push_back({plan.grid[i].first, plan.grid[i].second, "M0_poisson_p", g.p_value, g.p_value,
                        g.p_value, res.m0[i].size(), res.rows[2 * i].taint});
      }
    }
    emit(dir, "m0.csv", csv(estimate_csv_header(), rows));
    return gjk_tainted(rows) ? kExitTainted : 0;
  });
}

int cmd_pathcount(const Options& o) {
  if (!o.sample_file.empty()) {
    const io::Json j = io::read_json_file(o.sample_file);
    const int d = static_cast<int>(io::integer(io::field(j, "d", "sample"), "sample.d"));
    const int n_max = o.n_max > 0 ? o.n_max : o.config.empty() ? 10 : load(o).n_max;
    return dispatch_dimension(d, [&](auto dim) {
      constexpr int D = decltype(dim)::value;
      const BooleanSample<D> s = io::sample_from_json<D>(j);
      const IntersectionGraph<D> g = build_graph(s);
      const auto counts = path_count_profile(s, g, n_max);
      std::string out = "n,count\n";
      for (std::size_t k = 0; k < counts.size(); ++k)
        out += std::to_string(k + 1) + "," + std::to_string(counts[k]) + "\n";
      emit(output_dir(o, std::nullopt), "pathcount.csv", out);
      return g.tainted ? kExitTainted : 0;
    });
  }
  const auto c = load(o);
  const SweepPlan plan = c.plan();
  const std::string dir = output_dir(o, c.output_dir);
  return dispatch_dimension(plan.dimension(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    const auto rows = pathcount_sweep<D>(plan, o.n_max > 0 ? o.n_max : c.n_max);
    emit(dir, "pathcount.csv", csv(estimate_csv_header(), rows));
    if (o.svg && !dir.empty()) emit(dir, "pathcount.svg", io::svg_plot(rows, "path_total"));
    return gjk_tainted(rows) ? kExitTainted : 0;
  });
}

int cmd_margin(const Options& o) {
  const auto c = load(o);
  const SweepPlan plan = c.plan();
  const double miss = plan.margin.kind == MarginPolicy::Kind::Auto ? plan.margin.value : 0.01;
  std::string out = "u,L,margin,residual,residual_bias\n";
  for (const auto& [u, side] : plan.grid) {
    const MarginRecommendation r = recommended_margin(plan.law, Window{plan.dimension(), side, 0.0}, miss);
    out += format_number(u) + "," + format_number(side) + "," + format_number(r.margin) + "," +
           format_number(r.residual) + "," + (r.residual_bias ? "1" : "0") + "\n";
  }
  emit(output_dir(o, c.output_dir), "margin.csv", out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson Boolean model toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config (JSON)");
    sub->add_option("--out", o.out, "output directory (default: config, then $BOOLPERC_OUT_DIR, then stdout)");
    sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  };

  auto* classify_cmd = app.add_subcommand("classify", "density and robustness verdict");
  add_common(classify_cmd);
  classify_cmd->add_option("--family", o.family, "long-short | independent-axes | dependent-axes | right-triangle");
  classify_cmd->add_option("--d", o.d, "dimension");
  classify_cmd->add_option("--m", o.m, "number of short axes (long-short)");
  classify_cmd->add_option("--alpha", o.alpha, "tail index");
  classify_cmd->add_option("--beta", o.beta, "axis exponents")->delimiter(',');
  classify_cmd->add_option("--alpha-vec", o.alpha_vec, "explicit tail indices alpha_1..alpha_d")->delimiter(',');
  classify_cmd->add_option("--vol-l1", o.vol_l1, "Vol in L1: true | false | unknown");
  classify_cmd->add_option("--vol-l2", o.vol_l2, "Vol in L2: true | false | unknown");
  classify_cmd->add_option("--diam-ld", o.diam_ld, "D(1) in L^d: true | false | unknown");
  classify_cmd->add_flag("--table", o.table, "also print the family's regime table");

  auto* table_cmd = app.add_subcommand("regime-table", "regime table CSV of the standard grids");
  add_common(table_cmd);
  table_cmd->add_option("--family", o.family, "family name or 'all'");

  auto* diam_cmd = app.add_subcommand("diam", "diameter sequence of a body");
  add_common(diam_cmd);
  diam_cmd->add_option("--body", o.body_file, "body document (JSON file)");
  diam_cmd->add_option("--body-json", o.body_json, "body document (inline JSON)");

  auto* sample_cmd = app.add_subcommand("sample", "write one sample snapshot");
  add_common(sample_cmd);
  sample_cmd->add_option("--point", o.point, "grid point index");
  sample_cmd->add_option("--replica", o.replica, "replica index");
  sample_cmd->add_flag("--palm", o.palm, "add a Palm grain at the origin");

  auto* percolate_cmd = app.add_subcommand("percolate", "crossing probability sweep");
  add_common(percolate_cmd);
  percolate_cmd->add_flag("--svg", o.svg, "also write an SVG plot");
  percolate_cmd->add_flag("--clusters", o.clusters, "also write per-replica clusters.csv");
  percolate_cmd->add_flag("--largest-fraction", o.largest_fraction, "add largest-cluster fraction rows");

  auto* coverage_cmd = app.add_subcommand("coverage", "covered fraction sweep");
  add_common(coverage_cmd);
  coverage_cmd->add_flag("--svg", o.svg, "also write an SVG plot");

  auto* m0_cmd = app.add_subcommand("m0", "M0 and N0 statistics");
  add_common(m0_cmd);

  auto* path_cmd = app.add_subcommand("pathcount", "Palm path-count profile");
  add_common(path_cmd);
  path_cmd->add_option("--sample", o.sample_file, "sample snapshot with a Palm vertex");
  path_cmd->add_option("--n-max", o.n_max, "largest graph distance (overrides the config)");
  path_cmd->add_flag("--svg", o.svg, "also write an SVG plot");

  auto* margin_cmd = app.add_subcommand("margin", "recommended window margins");
  add_common(margin_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*classify_cmd) return cmd_classify(o);
    if (*table_cmd) return cmd_regime_table(o);
    if (*diam_cmd) return cmd_diam(o);
    if (*sample_cmd) return cmd_sample(o);
    if (*percolate_cmd) return cmd_percolate(o);
    if (*coverage_cmd) return cmd_coverage(o);
    if (*m0_cmd) return cmd_m0(o);
    if (*path_cmd) return cmd_pathcount(o);
    if (*margin_cmd) return cmd_margin(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const io::Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
