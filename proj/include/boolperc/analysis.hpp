#pragma once

#include "boolperc/cluster.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/grain_law.hpp"
#include "boolperc/parallel.hpp"
#include "boolperc/process.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace boolperc {

/// Calls f(std::integral_constant<int, D>{}) for the runtime dimension d.
template <class F>
decltype(auto) dispatch_dimension(int d, F&& f) {
  switch (d) {
    case 2: return f(std::integral_constant<int, 2>{});
    case 3: return f(std::integral_constant<int, 3>{});
    case 4: return f(std::integral_constant<int, 4>{});
    case 5: return f(std::integral_constant<int, 5>{});
    default: throw InputError("dimension must be in [2, 5], got " + std::to_string(d));
  }
}

// ---------------------------------------------------------------------------
// Interval estimates

inline double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials,
                                                 double level = 0.95) {
  if (trials == 0) throw InputError("wilson interval needs trials >= 1");
  if (successes > trials) throw InputError("wilson interval needs successes <= trials");
  if (!(level > 0 && level < 1)) throw InputError("confidence level must lie in (0, 1)");
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

struct MeanEstimate {
  double mean = 0.0;
  double sd = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

/// Sample mean with a normal-approximation interval.
inline MeanEstimate mean_interval(const std::vector<double>& x, double level = 0.95) {
  MeanEstimate e;
  e.n = x.size();
  if (x.empty()) return e;
  e.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - e.mean) * (v - e.mean);
  e.sd = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0.0;
  const double half = normal_quantile(0.5 + 0.5 * level) * e.sd / std::sqrt(static_cast<double>(x.size()));
  e.lo = e.mean - half;
  e.hi = e.mean + half;
  return e;
}

struct GoodnessOfFit {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square test of integer counts against Poisson(mean). The
/// last cell holds the upper tail; cells are pooled left to right until
/// each expects at least `min_expected`.
inline GoodnessOfFit poisson_gof(const std::vector<std::size_t>& counts, double mean,
                                 double min_expected = 5.0) {
  if (counts.empty()) throw InputError("goodness of fit needs at least one count");
  if (!(mean > 0)) throw InputError("Poisson mean must be positive");
  const double n = static_cast<double>(counts.size());
  const std::size_t kmax = *std::max_element(counts.begin(), counts.end());
  const boost::math::poisson_distribution<double> law(mean);
  std::vector<double> observed(kmax + 1, 0.0), expected(kmax + 1, 0.0);
  for (std::size_t c : counts) observed[c] += 1.0;
  for (std::size_t k = 0; k < kmax; ++k) expected[k] = n * boost::math::pdf(law, static_cast<double>(k));
  expected[kmax] = kmax == 0 ? n : n * boost::math::cdf(boost::math::complement(law, kmax - 1.0));

  std::vector<std::pair<double, double>> cells;
  double o = 0.0, e = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    o += observed[k];
    e += expected[k];
    if (e >= min_expected) {
      cells.emplace_back(o, e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (cells.empty()) cells.emplace_back(o, e);
    else cells.back().first += o, cells.back().second += e;
  }

  GoodnessOfFit g;
  for (const auto& [ob, ex] : cells) g.statistic += (ob - ex) * (ob - ex) / ex;
  g.dof = static_cast<int>(cells.size()) - 1;
  if (g.dof < 1) return g;
  g.p_value = boost::math::cdf(boost::math::complement(
      boost::math::chi_squared_distribution<double>(g.dof), g.statistic));
  return g;
}

// ---------------------------------------------------------------------------
// Sweep plans

/// Explicit margin M, or the recommended margin for a miss probability.
struct MarginPolicy {
  enum class Kind { Explicit, Auto };
  Kind kind = Kind::Auto;
  double value = 0.01;

  static MarginPolicy fixed(double m) { return {Kind::Explicit, m}; }
  static MarginPolicy automatic(double miss_prob) { return {Kind::Auto, miss_prob}; }
};

struct SweepPlan {
  GrainLaw law;
  /// (u, L) grid points.
  std::vector<std::pair<double, double>> grid;
  std::size_t replicas = 1;
  std::uint64_t root_seed = 0;
  MarginPolicy margin;
  unsigned threads = 1;
  GraphOptions graph;
  ProcessOptions process;

  int dimension() const { return law.dimension(); }

  void validate() const {
    law.validate();
    if (grid.empty()) throw InputError("sweep grid must be non-empty");
    if (replicas < 1) throw InputError("replicas must be >= 1");
    for (const auto& [u, side] : grid) {
      if (!(u > 0) || !std::isfinite(u)) throw InputError("intensity must be positive");
      if (!(side > 0) || !std::isfinite(side)) throw InputError("window side must be positive");
    }
    if (margin.kind == MarginPolicy::Kind::Explicit && !(margin.value >= 0))
      throw InputError("explicit margin must be >= 0");
    if (margin.kind == MarginPolicy::Kind::Auto && !(margin.value > 0 && margin.value < 1))
      throw InputError("margin miss probability must lie in (0, 1)");
  }
};

struct ResolvedWindow {
  Window window;
  bool margin_bias = false;
};

inline ResolvedWindow resolve_window(const SweepPlan& plan, double side) {
  ResolvedWindow r;
  r.window = {plan.dimension(), side, 0.0};
  if (plan.margin.kind == MarginPolicy::Kind::Explicit) {
    r.window.margin = plan.margin.value;
  } else {
    const MarginRecommendation rec = recommended_margin(plan.law, r.window, plan.margin.value);
    r.window.margin = rec.margin;
    r.margin_bias = rec.residual_bias;
  }
  return r;
}

/// One line of a sweep CSV.
struct EstimateRow {
  double u = 0.0;
  double side = 0.0;
  std::string stat;
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  /// "none", or a ';'-joined subset of {gjk, margin-bias}.
  std::string taint = "none";
};

inline std::string estimate_csv_header() { return "u,L,stat,estimate,lo,hi,n,taint"; }

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string to_csv(const EstimateRow& r) {
  return format_number(r.u) + "," + format_number(r.side) + "," + r.stat + "," +
         format_number(r.estimate) + "," + format_number(r.lo) + "," + format_number(r.hi) + "," +
         std::to_string(r.n) + "," + r.taint;
}

inline std::string taint_label(bool gjk, bool margin_bias) {
  if (!gjk && !margin_bias) return "none";
  if (gjk && margin_bias) return "gjk;margin-bias";
  return gjk ? "gjk" : "margin-bias";
}

/// Runs f(sample, rng) for every replica of grid point `point`, in
/// parallel, returning results in replica order. Replica r of point i is
/// keyed by (root_seed, r, i); `rng` is an independent child stream for
/// extra draws such as the Palm grain.
template <int D, class F>
auto run_replicas(const SweepPlan& plan, std::size_t point, const Window& window, F&& f) {
  using R = std::decay_t<decltype(f(std::declval<BooleanSample<D>&>(), std::declval<CounterRng&>()))>;
  const double u = plan.grid.at(point).first;
  return parallel_map<R>(plan.replicas, plan.threads, [&](std::size_t r) {
    const Provenance prov{plan.root_seed, r, point};
    BooleanSample<D> s = sample_process<D>(window, u, plan.law, prov, plan.process);
    CounterRng extra = CounterRng(prov.root_seed, prov.replica, prov.stream).split(1);
    return f(s, extra);
  });
}

// ---------------------------------------------------------------------------
// Observables

/// Fraction of the probe grid (i + 1/2) L / n, n = max(1, round(L / spacing))
/// per axis, covered by at least one grain.
template <int D>
double covered_fraction(const BooleanSample<D>& s, double probe_spacing, double tol = 1e-9) {
  if (!(probe_spacing > 0)) throw InputError("probe spacing must be positive");
  if (s.vertices.empty()) return 0.0;
  const double side = s.window.side;
  const long n = std::max(1L, std::lround(side / probe_spacing));
  const SpatialIndex<D> index = build_index(s);
  std::array<long, D> idx{};
  std::size_t covered = 0, total = 0;
  while (true) {
    Vec<D> p;
    for (int i = 0; i < D; ++i) p(i) = (static_cast<double>(idx[i]) + 0.5) * side / static_cast<double>(n);
    if (index.any_containing(p, [&](std::uint32_t a) { return contains(s.vertices[a].grain, p, tol); }))
      ++covered;
    ++total;
    int i = 0;
    for (; i < D; ++i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
    if (i == D) break;
  }
  return static_cast<double>(covered) / static_cast<double>(total);
}

/// c_n = number of vertices at graph distance exactly n from the Palm
/// vertex, n = 1..n_max.
template <int D>
std::vector<std::size_t> path_count_profile(const BooleanSample<D>& s, const IntersectionGraph<D>& g,
                                            int n_max) {
  if (!s.palm) throw InputError("path counts need a Palm vertex");
  if (!g.edges_stored) throw ResourceError("path counts need stored edges");
  if (n_max < 1) throw InputError("n_max must be >= 1");
  const std::size_t n = s.vertices.size();
  std::vector<std::size_t> offset(n + 1, 0);
  for (const auto& [a, b] : g.edges) ++offset[a + 1], ++offset[b + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<std::uint32_t> adj(offset.back());
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (const auto& [a, b] : g.edges) adj[fill[a]++] = b, adj[fill[b]++] = a;

  std::vector<int> dist(n, -1);
  std::vector<std::size_t> counts(n_max, 0);
  std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(s.palm_index)}, next;
  dist[s.palm_index] = 0;
  for (int level = 1; level <= n_max && !frontier.empty(); ++level) {
    next.clear();
    for (std::uint32_t v : frontier)
      for (std::size_t e = offset[v]; e < offset[v + 1]; ++e)
        if (dist[adj[e]] < 0) {
          dist[adj[e]] = level;
          next.push_back(adj[e]);
        }
    counts[level - 1] = next.size();
    std::swap(frontier, next);
  }
  return counts;
}

/// Per-replica cluster observables.
template <int D>
ClusterSummary summarize(const BooleanSample<D>& s, IntersectionGraph<D>& g, const GjkOptions& gjk) {
  ClusterSummary c;
  c.replica = s.seed.replica;
  c.u = s.intensity;
  c.side = s.window.side;
  c.n_vertices = s.vertices.size();
  c.n_edges = g.edge_count;
  c.largest_cluster = g.forest.largest_cluster();
  c.crossing = crossing(s, g, gjk);
  const DegreeStats st = degree_stats(s, g, gjk.gap_tol);
  c.m0 = st.m0;
  c.n0 = st.n0;
  return c;
}

inline std::string cluster_csv_header() {
  return "replica,u,L,n_vertices,n_edges,largest_cluster,crossing,M0,N0";
}

inline std::string to_csv(const ClusterSummary& c) {
  return std::to_string(c.replica) + "," + format_number(c.u) + "," + format_number(c.side) + "," +
         std::to_string(c.n_vertices) + "," + std::to_string(c.n_edges) + "," +
         std::to_string(c.largest_cluster) + "," + (c.crossing ? "1" : "0") + "," +
         std::to_string(c.m0) + "," + (c.n0 ? std::to_string(*c.n0) : "");
}

// ---------------------------------------------------------------------------
// Sweeps

struct PercolationResult {
  /// Per grid point: "crossing" (Wilson) and "largest_fraction" (mean).
  std::vector<EstimateRow> rows;
  std::vector<ClusterSummary> replicas;
};

template <int D>
PercolationResult percolation_sweep(const SweepPlan& plan) {
  plan.validate();
  PercolationResult out;
  for (std::size_t i = 0; i < plan.grid.size(); ++i) {
    const auto [u, side] = plan.grid[i];
    const ResolvedWindow rw = resolve_window(plan, side);
    struct Rep {
      ClusterSummary summary;
      bool tainted = false;
    };
    GraphOptions gopt = plan.graph;
    gopt.threads = 1;
    const auto reps = run_replicas<D>(plan, i, rw.window, [&](BooleanSample<D>& s, CounterRng&) {
      IntersectionGraph<D> g = build_graph(s, gopt);
      return Rep{summarize(s, g, gopt.gjk), g.tainted};
    });
    std::size_t hits = 0;
    bool gjk_taint = false;
    std::vector<double> fraction;
    for (const auto& r : reps) {
      hits += r.summary.crossing ? 1 : 0;
      gjk_taint = gjk_taint || r.tainted;
      fraction.push_back(r.summary.n_vertices
                             ? static_cast<double>(r.summary.largest_cluster) /
                                   static_cast<double>(r.summary.n_vertices)
                             : 0.0);
      out.replicas.push_back(r.summary);
    }
    const std::string taint = taint_label(gjk_taint, rw.margin_bias);
    const auto [lo, hi] = wilson_interval(hits, reps.size());
    out.rows.push_back({u, side, "crossing", static_cast<double>(hits) / reps.size(), lo, hi,
                        reps.size(), taint});
    const MeanEstimate m = mean_interval(fraction);
    out.rows.push_back({u, side, "largest_fraction", m.mean, std::max(0.0, m.lo),
                        std::min(1.0, m.hi), m.n, taint});
  }
  return out;
}

/// Crossing probability per grid point with Wilson intervals.
template <int D>
std::vector<EstimateRow> crossing_curve(const SweepPlan& plan) {
  std::vector<EstimateRow> rows;
  for (auto& r : percolation_sweep<D>(plan).rows)
    if (r.stat == "crossing") rows.push_back(std::move(r));
  return rows;
}

/// Mean covered fraction per grid point.
template <int D>
std::vector<EstimateRow> coverage_curve(const SweepPlan& plan, double probe_spacing) {
  plan.validate();
  if (!(probe_spacing > 0)) throw InputError("probe spacing must be positive");
  std::vector<EstimateRow> rows;
  for (std::size_t i = 0; i < plan.grid.size(); ++i) {
    const auto [u, side] = plan.grid[i];
    const ResolvedWindow rw = resolve_window(plan, side);
    const auto values = run_replicas<D>(plan, i, rw.window, [&](BooleanSample<D>& s, CounterRng&) {
      return covered_fraction(s, probe_spacing);
    });
    const MeanEstimate m = mean_interval(values);
    rows.push_back({u, side, "covered_fraction", m.mean, std::max(0.0, m.lo), std::min(1.0, m.hi),
                    m.n, taint_label(false, rw.margin_bias)});
  }
  return rows;
}

struct M0Result {
  std::vector<EstimateRow> rows;
  /// Per grid point, the M0 count of every replica.
  std::vector<std::vector<std::size_t>> m0;
};

/// M0 (grains covering the origin) and N0 (degree of a Palm vertex at the
/// origin) per grid point, with the Poisson goodness-of-fit p-value of M0
/// against u E[Vol] when the grain volume has a closed form.
template <int D>
M0Result m0_sweep(const SweepPlan& plan) {
  plan.validate();
  M0Result out;
  for (std::size_t i = 0; i < plan.grid.size(); ++i) {
    const auto [u, side] = plan.grid[i];
    const ResolvedWindow rw = resolve_window(plan, side);
    struct Rep {
      std::size_t m0 = 0, n0 = 0;
      bool tainted = false;
    };
    GraphOptions gopt = plan.graph;
    gopt.threads = 1;
    const auto reps = run_replicas<D>(plan, i, rw.window, [&](BooleanSample<D>& s, CounterRng& rng) {
      Rep r;
      // M0 is a property of the stationary sample; N0 needs the Palm grain.
      r.m0 = covering_count(s, Vec<D>(Vec<D>::Zero()), gopt.gjk.gap_tol);
      add_palm_grain(s, plan.law, rng);
      IntersectionGraph<D> g = build_graph(s, gopt);
      r.n0 = g.degree[s.palm_index];
      r.tainted = g.tainted;
      return r;
    });
    std::vector<double> m0, n0;
    std::vector<std::size_t> counts;
    bool gjk_taint = false;
    for (const auto& r : reps) {
      m0.push_back(static_cast<double>(r.m0));
      n0.push_back(static_cast<double>(r.n0));
      counts.push_back(r.m0);
      gjk_taint = gjk_taint || r.tainted;
    }
    const std::string taint = taint_label(gjk_taint, rw.margin_bias);
    const MeanEstimate a = mean_interval(m0), b = mean_interval(n0);
    out.rows.push_back({u, side, "M0", a.mean, std::max(0.0, a.lo), a.hi, a.n, taint});
    out.rows.push_back({u, side, "N0", b.mean, std::max(0.0, b.lo), b.hi, b.n, taint});
    out.m0.push_back(std::move(counts));
  }
  return out;
}

/// Palm path counts: mean total sum_n c_n and mean c_n for n = 1..n_max.
/// The Palm vertex sits at the window centre.
template <int D>
std::vector<EstimateRow> pathcount_sweep(const SweepPlan& plan, int n_max) {
  plan.validate();
  if (n_max < 1) throw InputError("n_max must be >= 1");
  std::vector<EstimateRow> rows;
  for (std::size_t i = 0; i < plan.grid.size(); ++i) {
    const auto [u, side] = plan.grid[i];
    const ResolvedWindow rw = resolve_window(plan, side);
    struct Rep {
      std::vector<std::size_t> c;
      bool tainted = false;
    };
    GraphOptions gopt = plan.graph;
    gopt.threads = 1;
    const auto reps = run_replicas<D>(plan, i, rw.window, [&](BooleanSample<D>& s, CounterRng& rng) {
      add_palm_grain(s, plan.law, rng, Vec<D>(Vec<D>::Constant(0.5 * side)));
      IntersectionGraph<D> g = build_graph(s, gopt);
      return Rep{path_count_profile(s, g, n_max), g.tainted};
    });
    bool gjk_taint = false;
    std::vector<double> total;
    std::vector<std::vector<double>> per(n_max);
    for (const auto& r : reps) {
      gjk_taint = gjk_taint || r.tainted;
      total.push_back(static_cast<double>(std::accumulate(r.c.begin(), r.c.end(), std::size_t{0})));
      for (int k = 0; k < n_max; ++k) per[k].push_back(static_cast<double>(r.c[k]));
    }
    const std::string taint = taint_label(gjk_taint, rw.margin_bias);
    const MeanEstimate t = mean_interval(total);
    rows.push_back({u, side, "path_total", t.mean, std::max(0.0, t.lo), t.hi, t.n, taint});
    for (int k = 0; k < n_max; ++k) {
      const MeanEstimate m = mean_interval(per[k]);
      rows.push_back({u, side, "c" + std::to_string(k + 1), m.mean, std::max(0.0, m.lo), m.hi, m.n, taint});
    }
  }
  return rows;
}

}  // namespace boolperc
