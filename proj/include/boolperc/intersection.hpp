#pragma once

#include "boolperc/convex_body.hpp"
#include "boolperc/gjk.hpp"

#include <string>

namespace boolperc {

/// GJK distance bounds between two bodies. Ball-ball pairs are decided in
/// closed form; a ball against anything else reduces to a point query on
/// its centre with the radius added to the tolerance.
template <int D>
GjkResult query_intersection(const ConvexBody<D>& a, const ConvexBody<D>& b,
                             const GjkOptions& opt = {}) {
  const auto* ba = a.as_ball();
  const auto* bb = b.as_ball();
  const Vec<D> delta = b.center() - a.center();
  if (ba && bb) {
    GjkResult r;
    const double dist = std::max(0.0, delta.norm() - ba->radius - bb->radius);
    r.lower = r.upper = dist;
    r.converged = true;
    r.intersecting = dist <= opt.gap_tol;
    return r;
  }
  if (ba || bb) {
    const ConvexBody<D>& other = ba ? b : a;
    const Vec<D>& c = ba ? a.center() : b.center();
    const double radius = ba ? ba->radius : bb->radius;
    GjkOptions shifted = opt;
    shifted.gap_tol = opt.gap_tol + radius;
    GjkResult r = point_query(other, c, shifted);
    r.lower = std::max(0.0, r.lower - radius);
    r.upper = std::max(0.0, r.upper - radius);
    return r;
  }
  auto sa = [&](const Vec<D>& v) -> Vec<D> { return a.support_point(v); };
  auto sb = [&](const Vec<D>& v) -> Vec<D> { return b.support_point(v); };
  return gjk_query<D>(sa, sb, delta, a.scale() + b.scale() + delta.norm(), opt);
}

/// True iff the bodies are within `opt.gap_tol` of each other. Throws
/// ConvergenceError if GJK exhausts `opt.max_iter`.
template <int D>
bool intersects(const ConvexBody<D>& a, const ConvexBody<D>& b, const GjkOptions& opt = {}) {
  const GjkResult r = query_intersection(a, b, opt);
  if (!r.converged)
    throw ConvergenceError("GJK did not converge within " + std::to_string(opt.max_iter) +
                               " iterations",
                           r.gap(), r.lower, r.upper);
  return r.intersecting;
}

/// Decision used by graph construction: a non-converged query counts as
/// intersecting when its lower distance bound is within tolerance.
inline bool lenient_decision(const GjkResult& r, const GjkOptions& opt) {
  return r.converged ? r.intersecting : r.lower <= opt.gap_tol;
}

/// Intersection test between a body and an axis-aligned box.
template <int D>
GjkResult query_box(const ConvexBody<D>& body, const Aabb<D>& box, const GjkOptions& opt = {}) {
  const Vec<D> mid = 0.5 * (box.lo + box.hi);
  const Vec<D> half = 0.5 * (box.hi - box.lo);
  auto sbox = [&](const Vec<D>& v) -> Vec<D> {
    Vec<D> p;
    for (int i = 0; i < D; ++i) p(i) = mid(i) + (v(i) >= 0 ? half(i) : -half(i));
    return p;
  };
  auto sb = [&](const Vec<D>& v) -> Vec<D> { return body.support_point(v); };
  const Vec<D> delta = mid - body.center();
  return gjk_query<D>(sb, sbox, delta, body.scale() + half.norm() + delta.norm(), opt);
}

}  // namespace boolperc
