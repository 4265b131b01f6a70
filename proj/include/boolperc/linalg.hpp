#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace boolperc {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;

template <int D>
using Mat = Eigen::Matrix<double, D, D>;

/// Column-major point set with at most `D` rows; columns are points.
template <int D>
using PointSet = Eigen::Matrix<double, D, Eigen::Dynamic>;

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Flip `v` so its first coordinate with |x| > tol is positive.
template <class Derived>
void sign_normalize(Eigen::MatrixBase<Derived>& v, double tol = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

/// Strict lexicographic "a > b".
template <class A, class B>
bool lex_greater(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > b(i)) return true;
    if (a(i) < b(i)) return false;
  }
  return false;
}

/// Axis-aligned box.
template <int D>
struct Aabb {
  Vec<D> lo;
  Vec<D> hi;

  bool overlaps(const Aabb& o) const {
    return (lo.array() <= o.hi.array()).all() && (o.lo.array() <= hi.array()).all();
  }
  bool contains(const Vec<D>& p) const {
    return (lo.array() <= p.array()).all() && (p.array() <= hi.array()).all();
  }
  double max_extent() const { return (hi - lo).maxCoeff(); }
  void expand(const Aabb& o) {
    lo = lo.cwiseMin(o.lo);
    hi = hi.cwiseMax(o.hi);
  }
};

}  // namespace boolperc
