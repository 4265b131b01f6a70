#pragma once

#include "boolperc/errors.hpp"
#include "boolperc/gjk.hpp"
#include "boolperc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace boolperc {

enum class BodyKind { Ball, Ellipsoid, Polytope };

inline const char* to_string(BodyKind k) {
  switch (k) {
    case BodyKind::Ball: return "ball";
    case BodyKind::Ellipsoid: return "ellipsoid";
    case BodyKind::Polytope: return "polytope";
  }
  return "?";
}

template <int D>
struct BallShape {
  double radius;
};

/// Semi-axes sorted descending; `frame` columns are the matching axis
/// directions; `transform` = frame * diag(semi_axes).
template <int D>
struct EllipsoidShape {
  Vec<D> semi_axes;
  Mat<D> frame;
  Mat<D> transform;
};

/// Vertices in world coordinates, one per column. Interior points are
/// allowed; the body is their convex hull.
template <int D>
struct PolytopeShape {
  PointSet<D> vertices;
};

/// A convex grain in R^D with a reference point (`center`). For balls and
/// ellipsoids the reference point is the centre of symmetry; for polytopes
/// it is any point of the body (e.g. a triangle corner).
template <int D>
class ConvexBody {
  static_assert(D >= 2, "bodies live in dimension >= 2");

 public:
  using Shape = std::variant<BallShape<D>, EllipsoidShape<D>, PolytopeShape<D>>;

  static ConvexBody ball(const Vec<D>& center, double radius) {
    if (!(radius > 0) || !std::isfinite(radius))
      throw InputError("ball radius must be positive and finite");
    return ConvexBody(center, BallShape<D>{radius});
  }

  /// Axes may be given in any order; they are sorted descending together
  /// with the frame columns.
  static ConvexBody ellipsoid(const Vec<D>& center, const Vec<D>& semi_axes,
                              const Mat<D>& frame = Mat<D>::Identity()) {
    if (!((semi_axes.array() > 0).all()) || !semi_axes.allFinite())
      throw InputError("ellipsoid semi-axes must be positive and finite");
    if (((frame.transpose() * frame) - Mat<D>::Identity()).cwiseAbs().maxCoeff() > 1e-10)
      throw InputError("ellipsoid frame is not orthonormal");
    std::array<int, D> order;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return semi_axes(a) > semi_axes(b); });
    EllipsoidShape<D> e;
    for (int i = 0; i < D; ++i) {
      e.semi_axes(i) = semi_axes(order[i]);
      e.frame.col(i) = frame.col(order[i]);
    }
    e.transform = e.frame * e.semi_axes.asDiagonal();
    return ConvexBody(center, std::move(e));
  }

  /// `center` defaults to the vertex centroid.
  static ConvexBody polytope(const PointSet<D>& vertices,
                             std::optional<Vec<D>> center = std::nullopt) {
    if (vertices.cols() < D + 1)
      throw InputError("polytope needs at least d+1 vertices");
    if (!vertices.allFinite()) throw InputError("polytope vertices must be finite");
    const Vec<D> centroid = vertices.rowwise().mean();
    PointSet<D> rel = vertices.colwise() - centroid;
    Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(rel)};
    lu.setThreshold(1e-10);
    if (lu.rank() < D) throw InputError("polytope vertices are affinely degenerate");
    return ConvexBody(center.value_or(centroid), PolytopeShape<D>{vertices});
  }

  const Vec<D>& center() const { return center_; }
  const Shape& shape() const { return shape_; }

  BodyKind kind() const { return static_cast<BodyKind>(shape_.index()); }
  const BallShape<D>* as_ball() const { return std::get_if<BallShape<D>>(&shape_); }
  const EllipsoidShape<D>* as_ellipsoid() const {
    return std::get_if<EllipsoidShape<D>>(&shape_);
  }
  const PolytopeShape<D>* as_polytope() const {
    return std::get_if<PolytopeShape<D>>(&shape_);
  }

  ConvexBody translated(const Vec<D>& t) const {
    ConvexBody out = *this;
    out.center_ += t;
    if (auto* p = std::get_if<PolytopeShape<D>>(&out.shape_)) p->vertices.colwise() += t;
    return out;
  }

  /// Rotation about the reference point.
  ConvexBody rotated(const Mat<D>& rot) const {
    ConvexBody out = *this;
    if (auto* e = std::get_if<EllipsoidShape<D>>(&out.shape_)) {
      e->frame = rot * e->frame;
      e->transform = e->frame * e->semi_axes.asDiagonal();
    } else if (auto* p = std::get_if<PolytopeShape<D>>(&out.shape_)) {
      p->vertices = (rot * (p->vertices.colwise() - center_)).colwise() + center_;
    }
    return out;
  }

  /// A maximiser of <x, dir> over the body; `dir` need not be unit.
  /// Polytope ties go to the lexicographically largest vertex.
  Vec<D> support_point(const Vec<D>& dir) const {
    return std::visit(
        [&](const auto& s) -> Vec<D> {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, BallShape<D>>) {
            const double n = dir.norm();
            if (!(n > 0)) return center_ + Vec<D>::Unit(0) * s.radius;
            return center_ + dir * (s.radius / n);
          } else if constexpr (std::is_same_v<S, EllipsoidShape<D>>) {
            // x = c + T T^T u / |T^T u| with T = Q diag(a).
            const Vec<D> t = s.transform.transpose() * dir;
            const double n = t.norm();
            if (!(n > 0)) return center_ + s.transform.col(0);
            return center_ + s.transform * (t / n);
          } else {
            Eigen::Index best = 0;
            double best_val = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < s.vertices.cols(); ++i) {
              const double val = s.vertices.col(i).dot(dir);
              if (val > best_val ||
                  (val == best_val && lex_greater(s.vertices.col(i), s.vertices.col(best)))) {
                best_val = val;
                best = i;
              }
            }
            return s.vertices.col(best);
          }
        },
        shape_);
  }

  /// Support function h(dir) = max <x, dir>.
  double support_value(const Vec<D>& dir) const { return support_point(dir).dot(dir); }

  Aabb<D> aabb() const {
    return std::visit(
        [&](const auto& s) -> Aabb<D> {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, BallShape<D>>) {
            return {center_.array() - s.radius, center_.array() + s.radius};
          } else if constexpr (std::is_same_v<S, EllipsoidShape<D>>) {
            const Vec<D> half = s.transform.rowwise().norm();
            return {center_ - half, center_ + half};
          } else {
            return {s.vertices.rowwise().minCoeff(), s.vertices.rowwise().maxCoeff()};
          }
        },
        shape_);
  }

  /// Largest distance from the reference point to a point of the body.
  double reach() const {
    return std::visit(
        [&](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, BallShape<D>>) return s.radius;
          else if constexpr (std::is_same_v<S, EllipsoidShape<D>>) return s.semi_axes(0);
          else return (s.vertices.colwise() - center_).colwise().norm().maxCoeff();
        },
        shape_);
  }

  /// Length used to scale numerical tolerances.
  double scale() const { return std::max(reach(), 1e-300); }

 private:
  ConvexBody(const Vec<D>& c, Shape s) : center_(c), shape_(std::move(s)) {
    if (!c.allFinite()) throw InputError("body reference point must be finite");
  }

  Vec<D> center_;
  Shape shape_;
};

/// Support mapping with the unit-direction precondition enforced.
template <int D>
Vec<D> support(const ConvexBody<D>& body, const Vec<D>& dir) {
  if (std::abs(dir.norm() - 1.0) > 1e-9) throw InputError("support direction must be a unit vector");
  return body.support_point(dir);
}

/// Distance bounds between a point and a body, via GJK.
template <int D>
GjkResult point_query(const ConvexBody<D>& body, const Vec<D>& p, const GjkOptions& opt = {}) {
  auto point_support = [&](const Vec<D>&) -> Vec<D> { return p; };
  auto body_support = [&](const Vec<D>& v) -> Vec<D> { return body.support_point(v); };
  return gjk_query<D>(point_support, body_support, Vec<D>(p - body.center()),
                      body.scale() + (p - body.center()).norm(), opt);
}

/// Point membership with absolute tolerance `tol`.
template <int D>
bool contains(const ConvexBody<D>& body, const Vec<D>& p, double tol = 1e-9) {
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        const Vec<D> rel = p - body.center();
        if constexpr (std::is_same_v<S, BallShape<D>>) {
          return rel.norm() <= s.radius + tol;
        } else if constexpr (std::is_same_v<S, EllipsoidShape<D>>) {
          const Vec<D> local = s.frame.transpose() * rel;
          // Rescale so `tol` is a length near the boundary.
          const double q = local.cwiseQuotient(s.semi_axes).norm();
          if (q <= 1.0) return true;
          return (q - 1.0) * s.semi_axes(D - 1) <= tol;
        } else {
          GjkOptions opt;
          opt.gap_tol = tol;
          const GjkResult r = point_query(body, p, opt);
          return r.converged ? r.intersecting : r.lower <= tol;
        }
      },
      body.shape());
}

namespace detail {

/// Facet hyperplanes (unit outward normal n, offset b with n.x <= b) of
/// the convex hull of `pts`, for D in {2, 3}. Brute force over vertex
/// subsets; meant for the small vertex counts of grains.
template <int D>
std::vector<std::pair<Vec<D>, double>> hull_facets(const PointSet<D>& pts) {
  static_assert(D == 2 || D == 3);
  std::vector<std::pair<Vec<D>, double>> facets;
  const Eigen::Index m = pts.cols();
  const double scale =
      std::max(1.0, (pts.colwise() - pts.rowwise().mean()).colwise().norm().maxCoeff());
  const double tol = 1e-10 * scale;

  // Adds the plane through pts[i] with normal n if it supports the set.
  auto try_plane = [&](Vec<D> n, Eigen::Index i) {
    const double nn = n.norm();
    if (nn <= 1e-12 * scale * scale) return;
    n /= nn;
    const double base = n.dot(pts.col(i));
    bool all_le = true, all_ge = true;
    for (Eigen::Index q = 0; q < m; ++q) {
      const double v = n.dot(pts.col(q)) - base;
      if (v > tol) all_le = false;
      if (v < -tol) all_ge = false;
    }
    if (!all_le && !all_ge) return;
    const Vec<D> out = all_le ? n : Vec<D>(-n);
    const double b = all_le ? base : -base;
    for (const auto& [fn, fb] : facets)
      if ((fn - out).norm() < 1e-9 && std::abs(fb - b) <= tol) return;
    facets.emplace_back(out, b);
  };

  if constexpr (D == 2) {
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j) {
        const Vec<2> e = pts.col(j) - pts.col(i);
        try_plane(Vec<2>(e(1), -e(0)), i);
      }
  } else {
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j)
        for (Eigen::Index k = j + 1; k < m; ++k)
          try_plane((pts.col(j) - pts.col(i)).cross(pts.col(k) - pts.col(i)), i);
  }
  return facets;
}

}  // namespace detail

/// Checks the body's invariants including the interior-ball assumption:
/// the body must contain a ball of radius `eps_min`. Balls and ellipsoids
/// are checked exactly; polytopes around their vertex centroid (facet
/// distances for d <= 3, support values in the 2d axis directions above),
/// and the reference point must lie in the polytope.
template <int D>
void validate(const ConvexBody<D>& body, double eps_min = 1e-3) {
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallShape<D>>) {
          if (s.radius < eps_min) throw InputError("ball smaller than the interior-ball radius");
        } else if constexpr (std::is_same_v<S, EllipsoidShape<D>>) {
          const Mat<D> gram = s.frame.transpose() * s.frame;
          if ((gram - Mat<D>::Identity()).cwiseAbs().maxCoeff() > 1e-10)
            throw InputError("ellipsoid frame is not orthonormal");
          if (s.semi_axes(D - 1) < eps_min)
            throw InputError("ellipsoid does not contain the interior ball");
          for (int i = 0; i + 1 < D; ++i)
            if (s.semi_axes(i) < s.semi_axes(i + 1)) throw InputError("semi-axes not sorted");
        } else {
          const Vec<D> centroid = s.vertices.rowwise().mean();
          double inner;
          if constexpr (D <= 3) {
            inner = std::numeric_limits<double>::infinity();
            for (const auto& [n, b] : detail::hull_facets<D>(s.vertices))
              inner = std::min(inner, b - n.dot(centroid));
          } else {
            inner = std::numeric_limits<double>::infinity();
            for (int i = 0; i < D; ++i)
              for (double sgn : {1.0, -1.0}) {
                const Vec<D> u = sgn * Vec<D>::Unit(i);
                inner = std::min(inner, body.support_value(u) - centroid.dot(u));
              }
          }
          if (!(inner >= eps_min)) throw InputError("polytope does not contain the interior ball");
          if (!contains(body, body.center(), 1e-9 * std::max(1.0, body.scale())))
            throw InputError("polytope reference point lies outside the body");
        }
      },
      body.shape());
}

}  // namespace boolperc
