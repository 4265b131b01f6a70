#pragma once

#include "boolperc/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace boolperc {

struct GjkOptions {
  /// Bodies closer than this are reported as intersecting.
  double gap_tol = 1e-9;
  int max_iter = 128;
  /// Relative convergence tolerance on the duality gap, scaled by the size
  /// of the configuration.
  double rel_tol = 1e-12;
};

struct GjkResult {
  bool intersecting = false;
  bool converged = false;
  /// Distance bounds between the two bodies: lower <= dist <= upper.
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;

  double gap() const { return upper - lower; }
};

namespace detail {

/// Minimum-norm point of the convex hull of `pts[0..n)`. On return the
/// points carrying positive weight are compacted to the front of `pts`
/// and their count is returned through `n`.
template <int D>
Vec<D> closest_on_hull(std::array<Vec<D>, D + 1>& pts, int& n) {
  using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, D, D>;
  using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, D, 1>;

  double best_norm = std::numeric_limits<double>::infinity();
  Vec<D> best = pts[0];
  unsigned best_mask = 1;

  const unsigned full = (1u << n) - 1;
  for (unsigned mask = 1; mask <= full; ++mask) {
    std::array<int, D + 1> idx{};
    int s = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx[s++] = i;

    if (s == 1) {
      const double nrm = pts[idx[0]].squaredNorm();
      if (nrm < best_norm) {
        best_norm = nrm;
        best = pts[idx[0]];
        best_mask = mask;
      }
      continue;
    }

    // Affine projection of the origin: x = p0 + E mu, (E^T E) mu = -E^T p0.
    const Vec<D>& p0 = pts[idx[0]];
    Eigen::Matrix<double, D, Eigen::Dynamic, 0, D, D> e(D, s - 1);
    for (int j = 1; j < s; ++j) e.col(j - 1) = pts[idx[j]] - p0;
    Small gram = e.transpose() * e;
    SmallVec rhs = -(e.transpose() * p0);

    Eigen::LDLT<Small> ldlt(gram);
    const double scale = gram.diagonal().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(scale > 0)) continue;
    const auto dvec = ldlt.vectorD();
    if (dvec.cwiseAbs().minCoeff() <= 1e-13 * scale) continue;

    SmallVec mu = ldlt.solve(rhs);
    const double lambda0 = 1.0 - mu.sum();
    if (!(lambda0 > 0) || !((mu.array() > 0).all())) continue;

    Vec<D> x = p0 + e * mu;
    const double nrm = x.squaredNorm();
    if (nrm < best_norm) {
      best_norm = nrm;
      best = x;
      best_mask = mask;
    }
  }

  int m = 0;
  for (int i = 0; i < n; ++i)
    if (best_mask & (1u << i)) pts[m++] = pts[i];
  n = m;
  return best;
}

}  // namespace detail

/// Distance query between two convex sets given by support mappings.
///
/// `support_a(v)` must return a maximiser of <x, v> over A (v need not be
/// unit). `scale` is a length characterising the configuration; it sets
/// the absolute convergence tolerance rel_tol * scale.
template <int D, class SupportA, class SupportB>
GjkResult gjk_query(const SupportA& support_a, const SupportB& support_b,
                    const Vec<D>& initial_dir, double scale,
                    const GjkOptions& opt = {}) {
  auto support_diff = [&](const Vec<D>& v) -> Vec<D> {
    return support_a(v) - support_b(Vec<D>(-v));
  };

  GjkResult res;
  const double conv_tol = opt.rel_tol * std::max(scale, 1.0);

  Vec<D> dir = initial_dir;
  if (!(dir.squaredNorm() > 0)) dir = Vec<D>::Unit(0);
  std::array<Vec<D>, D + 1> simplex;
  int n = 0;
  Vec<D> v = support_diff(Vec<D>(-dir));

  for (int it = 1; it <= opt.max_iter; ++it) {
    res.iterations = it;
    const double vn = v.norm();
    res.upper = vn;
    if (vn <= opt.gap_tol) {
      res.intersecting = true;
      res.converged = true;
      res.lower = std::min(res.lower, vn);
      return res;
    }

    const Vec<D> w = support_diff(Vec<D>(-v));
    res.lower = std::max(res.lower, v.dot(w) / vn);
    if (res.lower > opt.gap_tol) {
      res.intersecting = false;
      res.converged = true;
      return res;
    }
    if (vn - res.lower <= conv_tol) {
      // Distance is within numerical noise of gap_tol; near-touching pairs
      // count as intersecting.
      res.intersecting = true;
      res.converged = true;
      return res;
    }
    bool duplicate = false;
    for (int i = 0; i < n; ++i)
      if ((simplex[i] - w).squaredNorm() <= 1e-24 * std::max(1.0, w.squaredNorm()))
        duplicate = true;
    if (duplicate) {
      res.intersecting = res.lower <= opt.gap_tol;
      res.converged = true;
      return res;
    }

    simplex[n++] = w;
    v = detail::closest_on_hull<D>(simplex, n);
    if (n == D + 1) {
      // Origin is interior to a full-dimensional simplex.
      res.upper = 0.0;
      res.intersecting = true;
      res.converged = true;
      return res;
    }
  }
  res.converged = false;
  res.intersecting = false;
  return res;
}

}  // namespace boolperc
