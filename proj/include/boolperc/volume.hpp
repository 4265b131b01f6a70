#pragma once

#include "boolperc/convex_body.hpp"
#include "boolperc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace boolperc {

namespace detail {

/// Counter-clockwise convex hull (Andrew's monotone chain).
inline std::vector<Vec<2>> convex_hull_2d(const PointSet<2>& pts) {
  std::vector<Vec<2>> p(pts.cols());
  for (Eigen::Index i = 0; i < pts.cols(); ++i) p[i] = pts.col(i);
  std::sort(p.begin(), p.end(), [](const Vec<2>& a, const Vec<2>& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  auto cross = [](const Vec<2>& o, const Vec<2>& a, const Vec<2>& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
  };
  std::vector<Vec<2>> hull(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

inline double polygon_area(const PointSet<2>& pts) {
  const auto hull = convex_hull_2d(pts);
  double a = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& p = hull[i];
    const auto& q = hull[(i + 1) % hull.size()];
    a += p(0) * q(1) - p(1) * q(0);
  }
  return 0.5 * std::abs(a);
}

/// Fan from an interior point: sum over facets of area * height / 3.
inline double polyhedron_volume(const PointSet<3>& pts) {
  const Vec<3> inner = pts.rowwise().mean();
  const double scale =
      std::max(1.0, (pts.colwise() - inner).colwise().norm().maxCoeff());
  double vol = 0.0;
  for (const auto& [n, b] : hull_facets<3>(pts)) {
    // Facet polygon in an in-plane chart.
    Vec<3> e1 = n.unitOrthogonal();
    Vec<3> e2 = n.cross(e1);
    std::vector<Eigen::Index> on;
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
      if (std::abs(n.dot(pts.col(i)) - b) <= 1e-10 * scale) on.push_back(i);
    PointSet<2> flat(2, on.size());
    for (std::size_t j = 0; j < on.size(); ++j)
      flat.col(j) << e1.dot(pts.col(on[j])), e2.dot(pts.col(on[j]));
    vol += polygon_area(flat) * (b - n.dot(inner)) / 3.0;
  }
  return vol;
}

}  // namespace detail

/// Lebesgue volume. Polytopes are supported for d in {2, 3} only.
template <int D>
double volume(const ConvexBody<D>& body) {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallShape<D>>) {
          return unit_ball_volume(D) * std::pow(s.radius, D);
        } else if constexpr (std::is_same_v<S, EllipsoidShape<D>>) {
          return unit_ball_volume(D) * s.semi_axes.prod();
        } else {
          if constexpr (D == 2) return detail::polygon_area(s.vertices);
          else if constexpr (D == 3) return detail::polyhedron_volume(s.vertices);
          else throw UnsupportedError("polytope volume is only available for d = 2, 3");
        }
      },
      body.shape());
}

}  // namespace boolperc
