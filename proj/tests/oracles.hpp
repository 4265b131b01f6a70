#pragma once
// Brute-force reference implementations and random fixtures shared by the
// unit tests and the acceptance binary.

#include "boolperc/boolperc.hpp"

#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using namespace boolperc;
using Engine = std::mt19937_64;

template <int D>
Vec<D> gaussian_vec(Engine& eng) {
  std::normal_distribution<double> n;
  Vec<D> v;
  for (int i = 0; i < D; ++i) v(i) = n(eng);
  return v;
}

template <int D>
Vec<D> unit_vec(Engine& eng) {
  Vec<D> v;
  do v = gaussian_vec<D>(eng);
  while (v.norm() < 1e-6);
  return v.normalized();
}

/// Random orthogonal matrix from a Gaussian QR, determinant +1.
template <int D>
Mat<D> random_rotation(Engine& eng) {
  Mat<D> g;
  for (int c = 0; c < D; ++c) g.col(c) = gaussian_vec<D>(eng);
  Eigen::HouseholderQR<Mat<D>> qr(g);
  Mat<D> q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

/// Hull of 4..20 anisotropic Gaussian points; the reference point is the
/// vertex mean.
template <int D>
ConvexBody<D> random_polytope(Engine& eng) {
  std::uniform_int_distribution<int> count(D + 2, 20);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  const int n = count(eng);
  Vec<D> s;
  for (int i = 0; i < D; ++i) s(i) = scale(eng);
  const Mat<D> rot = random_rotation<D>(eng);
  PointSet<D> pts(D, n);
  for (int c = 0; c < n; ++c) pts.col(c) = rot * s.cwiseProduct(gaussian_vec<D>(eng));
  return ConvexBody<D>::polytope(pts);
}

template <int D>
ConvexBody<D> random_ellipsoid(Engine& eng) {
  std::uniform_real_distribution<double> log_axis(-1.0, 2.0);
  Vec<D> axes;
  for (int i = 0; i < D; ++i) axes(i) = std::exp(log_axis(eng));
  return ConvexBody<D>::ellipsoid(gaussian_vec<D>(eng), axes, random_rotation<D>(eng));
}

/// Diameter sequence of a finite point set by exhaustive pair search,
/// projecting out each diameter direction in turn.
template <int D>
DiameterSequence<D> point_set_diameters(const PointSet<D>& pts) {
  DiameterSequence<D> out;
  out.values.setZero();
  out.directions.setZero();
  Eigen::Matrix<double, D, Eigen::Dynamic> p = pts;
  for (int k = 0; k < D; ++k) {
    double best = -1.0;
    Vec<D> dir = Vec<D>::Zero();
    for (Eigen::Index i = 0; i < p.cols(); ++i)
      for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
        const double dist = (p.col(i) - p.col(j)).norm();
        if (dist > best) best = dist, dir = p.col(i) - p.col(j);
      }
    out.values(k) = std::max(best, 0.0);
    if (best > 0) {
      dir.normalize();
      out.directions.col(k) = dir;
      p -= dir * (dir.transpose() * p);
    }
  }
  return out;
}

/// Ellipsoid diameters from the eigen-decomposition of T T^T.
template <int D>
DiameterSequence<D> ellipsoid_diameters(const ConvexBody<D>& e) {
  const Mat<D> t = e.as_ellipsoid()->transform;
  Eigen::SelfAdjointEigenSolver<Mat<D>> es(t * t.transpose());
  DiameterSequence<D> out;
  for (int k = 0; k < D; ++k) {
    out.values(k) = 2.0 * std::sqrt(std::max(0.0, es.eigenvalues()(D - 1 - k)));
    out.directions.col(k) = es.eigenvectors().col(D - 1 - k);
  }
  return out;
}

/// Every pair tested by the narrow phase, no broad phase.
template <int D>
std::vector<Edge> brute_force_edges(const BooleanSample<D>& s, const GjkOptions& opt = {}) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < s.vertices.size(); ++i)
    for (std::uint32_t j = i + 1; j < s.vertices.size(); ++j)
      if (lenient_decision(query_intersection(s.vertices[i].grain, s.vertices[j].grain, opt), opt))
        edges.emplace_back(i, j);
  return edges;
}

/// Component label of every vertex by breadth-first search.
inline std::vector<int> bfs_components(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [a, b] : edges) adj[a].push_back(b), adj[b].push_back(a);
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::queue<std::uint32_t> q;
    q.push(static_cast<std::uint32_t>(s));
    label[s] = next;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (auto w : adj[v])
        if (label[w] < 0) label[w] = next, q.push(w);
    }
    ++next;
  }
  return label;
}

/// True iff the forest roots induce the same partition as `labels`.
template <int D>
bool same_partition(const ClusterForest<D>& forest, const std::vector<int>& labels) {
  std::map<std::size_t, int> root_to_label;
  std::map<int, std::size_t> label_to_root;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t r = forest.find(static_cast<std::uint32_t>(i));
    const auto [a, fresh_a] = root_to_label.emplace(r, labels[i]);
    const auto [b, fresh_b] = label_to_root.emplace(labels[i], r);
    if (a->second != labels[i] || b->second != r) return false;
  }
  return true;
}

/// Runs a shell command and returns its stdout and exit status.
struct Run {
  std::string out;
  int status = -1;
};

inline Run run(const std::string& cmd) {
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace oracle
