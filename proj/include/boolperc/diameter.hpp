#pragma once

#include "boolperc/convex_body.hpp"
#include "boolperc/errors.hpp"

#include <cmath>

namespace boolperc {

/// Non-increasing diameters D(1) >= ... >= D(d) and their orientations.
/// `directions.col(i)` is the unit orientation of D(i+1) in ambient
/// coordinates, sign-normalised (first nonzero coordinate positive).
template <int D>
struct DiameterSequence {
  Vec<D> values;
  Mat<D> directions;
};

/// Box centred at `center` spanned by `frame` columns with half lengths
/// `half_lengths` (non-increasing).
template <int D>
struct OrientedRectangle {
  Vec<D> center;
  Mat<D> frame;
  Vec<D> half_lengths;

  double volume() const { return std::pow(2.0, D) * half_lengths.prod(); }

  double support_value(const Vec<D>& dir) const {
    return center.dot(dir) + (frame.transpose() * dir).cwiseAbs().dot(half_lengths);
  }

  Aabb<D> aabb() const {
    const Vec<D> half = frame.cwiseAbs() * half_lengths;
    return {center - half, center + half};
  }
};

namespace detail {

/// Diameter sequence of a finite point set given in chart coordinates
/// (`pts`, k x m) with chart basis `basis` (D x k, orthonormal columns).
/// Each step takes the farthest pair, records its lifted direction, and
/// re-expresses the points in a basis of the orthogonal complement.
template <int D>
void point_set_diameters(Eigen::MatrixXd pts, Eigen::MatrixXd basis, DiameterSequence<D>& out) {
  constexpr double kTieRel = 1e-12;
  for (int level = 0; level < D; ++level) {
    const Eigen::Index k = pts.rows();
    const Eigen::Index m = pts.cols();

    if (k == 1) {
      const double lo = pts.row(0).minCoeff();
      const double hi = pts.row(0).maxCoeff();
      out.values(level) = hi - lo;
      Vec<D> dir = basis.col(0);
      sign_normalize(dir);
      out.directions.col(level) = dir;
      return;
    }

    // Farthest pair; near-ties resolved by the lexicographically largest
    // sign-normalised ambient direction.
    double best = -1.0;
    Vec<D> best_dir = Vec<D>::Zero();
    Eigen::VectorXd best_chart;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i + 1; j < m; ++j) {
        const Eigen::VectorXd diff = pts.col(i) - pts.col(j);
        const double d2 = diff.squaredNorm();
        if (d2 < best * (1.0 - kTieRel) || d2 == 0.0) continue;
        Eigen::VectorXd chart = diff / std::sqrt(d2);
        Vec<D> amb = basis * chart;
        // Keep the chart direction consistent with the normalised lift.
        Vec<D> norm_amb = amb;
        sign_normalize(norm_amb);
        if (norm_amb.dot(amb) < 0) chart = -chart;
        if (d2 > best * (1.0 + kTieRel) || lex_greater(norm_amb, best_dir)) {
          best_dir = norm_amb;
          best_chart = chart;
        }
        best = std::max(best, d2);
      }
    }
    if (!(best > 0)) throw InputError("degenerate projection in diameter sequence");
    out.values(level) = std::sqrt(best);
    out.directions.col(level) = best_dir;

    // Householder reflection H with H * best_chart = -+e1; its remaining
    // columns span the orthogonal complement within the chart.
    Eigen::VectorXd w = best_chart;
    const double s = w(0) >= 0 ? 1.0 : -1.0;
    w(0) += s;
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(k, k) - (2.0 / w.squaredNorm()) * (w * w.transpose());
    Eigen::MatrixXd comp = h.rightCols(k - 1);
    pts = comp.transpose() * pts;
    basis = basis * comp;
  }
}

}  // namespace detail

/// The diameter sequence obtained by iterated orthogonal projection:
/// D(1) is the diameter of the body, D(i+1) the diameter of its
/// projection onto the hyperplane (within the previous one) orthogonal to
/// the orientation of D(i).
///
/// Ball: all values 2r, canonical axes. Ellipsoid: the longest chord is
/// the major axis and projecting along a principal axis yields the
/// ellipsoid spanned by the remaining axes, so D(k) = 2 a_k with the
/// sorted frame columns as orientations. Polytope: exact on the vertex
/// set, since the projection of a hull is the hull of the projections.
template <int D>
DiameterSequence<D> diameter_sequence(const ConvexBody<D>& body) {
  DiameterSequence<D> out;
  out.values.setZero();
  out.directions.setZero();
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallShape<D>>) {
          out.values.setConstant(2.0 * s.radius);
          out.directions.setIdentity();
        } else if constexpr (std::is_same_v<S, EllipsoidShape<D>>) {
          out.values = 2.0 * s.semi_axes;
          for (int i = 0; i < D; ++i) {
            Vec<D> col = s.frame.col(i);
            sign_normalize(col);
            out.directions.col(i) = col;
          }
        } else {
          detail::point_set_diameters<D>(Eigen::MatrixXd(s.vertices),
                                         Eigen::MatrixXd::Identity(D, D), out);
        }
      },
      body.shape());
  return out;
}

/// Box around the body aligned with its diameter orientations, with half
/// lengths equal to the diameters. Contains the body because the body's
/// width along each orientation is at most the corresponding diameter,
/// and its volume 2^d prod D(i) is at most 2^d d! Vol(body).
template <int D>
OrientedRectangle<D> bounding_rectangle(const ConvexBody<D>& body) {
  const DiameterSequence<D> seq = diameter_sequence(body);
  return {body.center(), seq.directions, seq.values};
}

}  // namespace boolperc
