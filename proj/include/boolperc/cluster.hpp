#pragma once

#include "boolperc/convex_body.hpp"
#include "boolperc/diameter.hpp"
#include "boolperc/intersection.hpp"
#include "boolperc/parallel.hpp"
#include "boolperc/process.hpp"
#include "boolperc/spatial_index.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace boolperc {

/// Disjoint sets with union by rank and path compression, plus per-root
/// size and bounding-box extent.
template <int D>
class ClusterForest {
 public:
  ClusterForest() = default;
  explicit ClusterForest(std::vector<Aabb<D>> boxes)
      : parent_(boxes.size()), rank_(boxes.size(), 0), size_(boxes.size(), 1),
        extent_(std::move(boxes)) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::size_t vertex_count() const { return parent_.size(); }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  std::uint32_t find(std::uint32_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  /// Returns true if two clusters were merged.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    size_[a] += size_[b];
    extent_[a].expand(extent_[b]);
    return true;
  }

  std::size_t cluster_size(std::uint32_t x) const { return size_[find(x)]; }
  const Aabb<D>& cluster_extent(std::uint32_t x) const { return extent_[find(x)]; }

  std::size_t cluster_count() const {
    std::size_t n = 0;
    for (std::uint32_t i = 0; i < parent_.size(); ++i)
      if (parent_[i] == i) ++n;
    return n;
  }

  std::size_t largest_cluster() const {
    std::size_t best = 0;
    for (std::uint32_t i = 0; i < parent_.size(); ++i)
      if (parent_[i] == i) best = std::max(best, size_[i]);
    return best;
  }

  std::vector<std::uint32_t> members(std::uint32_t x) const {
    const std::uint32_t r = find(x);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < parent_.size(); ++i)
      if (find(i) == r) out.push_back(i);
    return out;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::vector<std::size_t> size_;
  std::vector<Aabb<D>> extent_;
};

struct GraphOptions {
  GjkOptions gjk;
  /// Above this vertex count only union-find merges are kept.
  std::size_t edge_store_limit = 1'000'000;
  /// Failure rate above which a run is tainted.
  double taint_rate = 1e-6;
  unsigned threads = 1;
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;

template <int D>
struct IntersectionGraph {
  std::vector<Edge> edges;  // sorted, i < j; empty if !edges_stored
  bool edges_stored = true;
  std::size_t edge_count = 0;
  std::vector<std::uint32_t> degree;
  ClusterForest<D> forest;
  std::size_t candidate_pairs = 0;
  std::size_t gjk_failures = 0;
  bool tainted = false;
};

/// Axis-aligned boxes of every grain grown by `pad`, the broad-phase keys.
template <int D>
std::vector<Aabb<D>> grain_boxes(const BooleanSample<D>& s, double pad = 0.0) {
  std::vector<Aabb<D>> boxes;
  boxes.reserve(s.vertices.size());
  for (const auto& v : s.vertices) {
    Aabb<D> b = v.grain.aabb();
    b.lo.array() -= pad;
    b.hi.array() += pad;
    boxes.push_back(b);
  }
  return boxes;
}

/// Median first diameter, the base cell of the grid hierarchy.
template <int D>
double median_diameter(const BooleanSample<D>& s) {
  if (s.vertices.empty()) return 1.0;
  std::vector<double> d1;
  d1.reserve(s.vertices.size());
  for (const auto& v : s.vertices) d1.push_back(diameter_sequence(v.grain).values(0));
  std::nth_element(d1.begin(), d1.begin() + d1.size() / 2, d1.end());
  return d1[d1.size() / 2];
}

template <int D>
SpatialIndex<D> build_index(const BooleanSample<D>& s) {
  return SpatialIndex<D>(grain_boxes(s), median_diameter(s));
}

/// Intersection graph: broad phase on grain boxes through the grid
/// hierarchy, narrow phase by GJK. Non-converged GJK queries are counted
/// and decided by their lower distance bound. Output does not depend on
/// the thread count.
template <int D>
IntersectionGraph<D> build_graph(const BooleanSample<D>& s, const GraphOptions& opt = {}) {
  const std::size_t n = s.vertices.size();
  IntersectionGraph<D> g;
  g.degree.assign(n, 0);
  g.forest = ClusterForest<D>(grain_boxes(s));
  g.edges_stored = n <= opt.edge_store_limit;
  if (n == 0) return g;

  const SpatialIndex<D> index(grain_boxes(s, opt.gjk.gap_tol), median_diameter(s));
  const auto candidates = index.overlapping_pairs();
  g.candidate_pairs = candidates.size();

  std::vector<std::uint8_t> hit(candidates.size(), 0);
  std::vector<std::uint8_t> failed(candidates.size(), 0);
  parallel_for(candidates.size(), opt.threads, [&](std::size_t i) {
    const auto [a, b] = candidates[i];
    const GjkResult r = query_intersection(s.vertices[a].grain, s.vertices[b].grain, opt.gjk);
    failed[i] = r.converged ? 0 : 1;
    hit[i] = lenient_decision(r, opt.gjk) ? 1 : 0;
  });

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    g.gjk_failures += failed[i];
    if (!hit[i]) continue;
    const auto [a, b] = candidates[i];
    ++g.edge_count;
    ++g.degree[a];
    ++g.degree[b];
    g.forest.unite(a, b);
    if (g.edges_stored) g.edges.push_back(candidates[i]);
  }
  g.tainted = candidates.empty()
                  ? false
                  : static_cast<double>(g.gjk_failures) / static_cast<double>(candidates.size()) >
                        opt.taint_rate;
  return g;
}

/// Whether one cluster touches both faces {x_1 = 0} and {x_1 = L} of the
/// window, each face tested against a slab of thickness gap_tol.
template <int D>
bool crossing(const BooleanSample<D>& s, IntersectionGraph<D>& g, const GjkOptions& opt = {}) {
  const double side = s.window.side;
  Aabb<D> left{Vec<D>::Zero(), Vec<D>::Constant(side)};
  left.lo(0) = -opt.gap_tol;
  left.hi(0) = 0.0;
  Aabb<D> right{Vec<D>::Zero(), Vec<D>::Constant(side)};
  right.lo(0) = side;
  right.hi(0) = side + opt.gap_tol;

  auto touches = [&](const ConvexBody<D>& body, const Aabb<D>& face) {
    if (!body.aabb().overlaps(face)) return false;
    return lenient_decision(query_box(body, face, opt), opt);
  };

  std::vector<std::uint8_t> flags(s.vertices.size(), 0);
  for (std::uint32_t i = 0; i < s.vertices.size(); ++i) {
    const auto& body = s.vertices[i].grain;
    std::uint8_t f = 0;
    if (touches(body, left)) f |= 1;
    if (touches(body, right)) f |= 2;
    if (f) flags[g.forest.find(i)] |= f;
  }
  return std::any_of(flags.begin(), flags.end(), [](std::uint8_t f) { return f == 3; });
}

struct DegreeStats {
  std::size_t m0 = 0;
  std::optional<std::size_t> n0;
  /// histogram[k] = number of vertices of degree k.
  std::vector<std::size_t> histogram;
};

/// Number of grains containing `p`.
template <int D>
std::size_t covering_count(const BooleanSample<D>& s, const Vec<D>& p, double tol = 1e-9) {
  std::size_t n = 0;
  for (const auto& v : s.vertices) {
    const Aabb<D> b = v.grain.aabb();
    if ((b.lo.array() - tol > p.array()).any() || (b.hi.array() + tol < p.array()).any()) continue;
    if (contains(v.grain, p, tol)) ++n;
  }
  return n;
}

/// M0 (grains containing the origin), N0 (Palm vertex degree) and the
/// degree histogram.
template <int D>
DegreeStats degree_stats(const BooleanSample<D>& s, const IntersectionGraph<D>& g,
                         double tol = 1e-9) {
  DegreeStats st;
  st.m0 = covering_count(s, Vec<D>(Vec<D>::Zero()), tol);
  if (s.palm) st.n0 = g.degree.at(s.palm_index);
  for (std::uint32_t d : g.degree) {
    if (d >= st.histogram.size()) st.histogram.resize(d + 1, 0);
    ++st.histogram[d];
  }
  return st;
}

/// One CSV summary row per replica.
struct ClusterSummary {
  std::size_t replica = 0;
  double u = 0;
  double side = 0;
  std::size_t n_vertices = 0;
  std::size_t n_edges = 0;
  std::size_t largest_cluster = 0;
  bool crossing = false;
  std::size_t m0 = 0;
  std::optional<std::size_t> n0;
};

}  // namespace boolperc
