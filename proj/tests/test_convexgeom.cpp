#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace boolperc;

namespace {

constexpr double kPi = std::numbers::pi;

PointSet<2> rect_4x3() {
  PointSet<2> v(2, 4);
  v << 0, 4, 0, 4,
       0, 0, 3, 3;
  return v;
}

ConvexBody<2> square(const Vec<2>& c, double angle) {
  const Eigen::Rotation2Dd r(angle);
  PointSet<2> v(2, 4);
  v << -0.5, 0.5, 0.5, -0.5,
       -0.5, -0.5, 0.5, 0.5;
  return ConvexBody<2>::polytope((r.toRotationMatrix() * v).colwise() + c, c);
}

/// Convex polygon vertices in counter-clockwise order.
std::vector<Vec<2>> ccw(const ConvexBody<2>& b) { return detail::convex_hull_2d(b.as_polytope()->vertices); }

bool inside_polygon(const std::vector<Vec<2>>& poly, const Vec<2>& p) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec<2> a = poly[i], b = poly[(i + 1) % poly.size()];
    const Vec<2> e = b - a, q = p - a;
    if (e.x() * q.y() - e.y() * q.x() < 0) return false;
  }
  return true;
}

/// Separation along the best axis of the separating-axis test: positive
/// is a gap, negative an overlap depth.
double sat_separation(const std::vector<Vec<2>>& a, const std::vector<Vec<2>>& b) {
  double best = -kInf;
  for (const auto* poly : {&a, &b})
    for (std::size_t i = 0; i < poly->size(); ++i) {
      const Vec<2> e = (*poly)[(i + 1) % poly->size()] - (*poly)[i];
      const Vec<2> n = Vec<2>(e.y(), -e.x()).normalized();
      double amax = -kInf, amin = kInf, bmax = -kInf, bmin = kInf;
      for (const auto& p : a) amax = std::max(amax, p.dot(n)), amin = std::min(amin, p.dot(n));
      for (const auto& p : b) bmax = std::max(bmax, p.dot(n)), bmin = std::min(bmin, p.dot(n));
      best = std::max(best, std::max(bmin - amax, amin - bmax));
    }
  return best;
}

/// Dense boundary sampling: some boundary sample of one polygon lies in the other.
bool sampled_intersection(const std::vector<Vec<2>>& a, const std::vector<Vec<2>>& b, int samples) {
  auto any_inside = [&](const std::vector<Vec<2>>& from, const std::vector<Vec<2>>& to) {
    const int per_edge = samples / static_cast<int>(from.size());
    for (std::size_t i = 0; i < from.size(); ++i)
      for (int s = 0; s < per_edge; ++s) {
        const double t = static_cast<double>(s) / per_edge;
        if (inside_polygon(to, (1 - t) * from[i] + t * from[(i + 1) % from.size()])) return true;
      }
    return false;
  };
  return any_inside(a, b) || any_inside(b, a);
}

}  // namespace

TEST(Support, UnitBallAlongAxis) {
  const auto b = ConvexBody<3>::ball(Vec<3>::Zero(), 1.0);
  EXPECT_TRUE(support(b, Vec<3>(Vec<3>::UnitX())).isApprox(Vec<3>::UnitX()));
}

TEST(Support, AxisAlignedEllipse) {
  const auto e = ConvexBody<2>::ellipsoid(Vec<2>::Zero(), Vec<2>(2, 1));
  EXPECT_NEAR((support(e, Vec<2>(Vec<2>::UnitX())) - Vec<2>(2, 0)).norm(), 0.0, 1e-12);
}

TEST(Support, RectangleCorner) {
  const auto p = ConvexBody<2>::polytope(rect_4x3());
  EXPECT_NEAR((support(p, Vec<2>(0.8, 0.6)) - Vec<2>(4, 3)).norm(), 0.0, 1e-12);
}

TEST(Intersects, UnitBalls) {
  const auto a = ConvexBody<2>::ball(Vec<2>::Zero(), 1.0);
  EXPECT_TRUE(intersects(a, ConvexBody<2>::ball(Vec<2>(1.9, 0), 1.0)));
  EXPECT_FALSE(intersects(a, ConvexBody<2>::ball(Vec<2>(2.1, 0), 1.0)));
}

TEST(Intersects, RotatedSquaresMatchSamplingOracle) {
  const auto a = square(Vec<2>::Zero(), 0.0);
  const auto b = square(Vec<2>(1.6, 0), kPi / 4);
  const double gap = sat_separation(ccw(a), ccw(b));
  ASSERT_GT(std::abs(gap), 1e-6);
  EXPECT_EQ(intersects(a, b), sampled_intersection(ccw(a), ccw(b), 100000));
  EXPECT_FALSE(intersects(a, b));  // 0.5 + sqrt(2)/2 < 1.6
  const auto c = square(Vec<2>(1.1, 0), kPi / 4);
  EXPECT_EQ(intersects(a, c), sampled_intersection(ccw(a), ccw(c), 100000));
  EXPECT_TRUE(intersects(a, c));
}

TEST(Intersects, SymmetricAndReflexive) {
  oracle::Engine eng(11);
  for (int i = 0; i < 200; ++i) {
    const auto a = oracle::random_polytope<3>(eng);
    const auto b = oracle::random_ellipsoid<3>(eng).translated(oracle::gaussian_vec<3>(eng) * 5.0);
    EXPECT_EQ(intersects(a, b), intersects(b, a));
    EXPECT_TRUE(intersects(a, a));
    EXPECT_TRUE(intersects(b, b));
  }
}

TEST(Intersects, AgreesWithSeparatingAxisOracle) {
  oracle::Engine eng(12);
  std::uniform_real_distribution<double> pos(-6.0, 6.0);
  int compared = 0, agree = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = oracle::random_polytope<2>(eng);
    const auto b = oracle::random_polytope<2>(eng).translated(Vec<2>(pos(eng), pos(eng)));
    const double sep = sat_separation(ccw(a), ccw(b));
    if (std::abs(sep) < 1e-6) continue;
    ++compared;
    agree += intersects(a, b) == (sep < 0) ? 1 : 0;
  }
  ASSERT_GT(compared, 9000);
  EXPECT_GE(static_cast<double>(agree) / compared, 0.999);
}

TEST(DiameterSequence, BallIsConstant) {
  const auto d = diameter_sequence(ConvexBody<3>::ball(Vec<3>::Zero(), 1.0));
  EXPECT_TRUE(d.values.isApprox(Vec<3>::Constant(2.0)));
}

TEST(DiameterSequence, RectangleMatchesProjectionOracle) {
  const auto body = ConvexBody<2>::polytope(rect_4x3());
  const auto ref = oracle::point_set_diameters<2>(rect_4x3());
  EXPECT_NEAR(ref.values(0), 5.0, 1e-12);
  EXPECT_NEAR(ref.values(1), 2.0 * 4.0 * 3.0 / 5.0, 1e-12);
  const auto got = diameter_sequence(body);
  EXPECT_NEAR(got.values(0), 5.0, 1e-12);
  EXPECT_NEAR(got.values(1), 4.8, 1e-12);
}

TEST(DiameterSequence, EllipsoidMatchesSampledWidths) {
  const auto e = ConvexBody<3>::ellipsoid(Vec<3>::Zero(), Vec<3>(3, 2, 1));
  const auto d = diameter_sequence(e);
  EXPECT_TRUE(d.values.isApprox(Vec<3>(6, 4, 2)));
  EXPECT_TRUE(d.directions.cwiseAbs().isApprox(Mat<3>::Identity()));

  // Widths over sampled directions, restricted to the complement of the
  // directions already found.
  oracle::Engine eng(13);
  Mat<3> found = Mat<3>::Zero();
  for (int k = 0; k < 3; ++k) {
    double best = 0.0;
    Vec<3> arg = Vec<3>::Zero();
    for (int i = 0; i < 10000; ++i) {
      Vec<3> u = oracle::unit_vec<3>(eng);
      for (int j = 0; j < k; ++j) u -= found.col(j) * found.col(j).dot(u);
      if (u.norm() < 1e-3) continue;
      u.normalize();
      const double w = e.support_value(u) + e.support_value(-u);
      if (w > best) best = w, arg = u;
    }
    EXPECT_NEAR(best, d.values(k), 0.02 * d.values(k));
    EXPECT_GT(std::abs(arg.dot(d.directions.col(k))), 0.95);
    found.col(k) = d.directions.col(k);
  }
}

TEST(DiameterSequence, DirectionsOrthonormal) {
  oracle::Engine eng(14);
  for (int i = 0; i < 200; ++i) {
    const auto d = diameter_sequence(oracle::random_polytope<3>(eng));
    EXPECT_LT((d.directions.transpose() * d.directions - Mat<3>::Identity()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GE(d.values(0), d.values(1));
    EXPECT_GE(d.values(1), d.values(2));
  }
}

TEST(DiameterSequence, MonotoneAndRotationEquivariantInD4) {
  oracle::Engine eng(15);
  for (int i = 0; i < 1000; ++i) {
    const auto b = i % 2 ? oracle::random_ellipsoid<4>(eng) : oracle::random_polytope<4>(eng);
    const auto d = diameter_sequence(b);
    for (int k = 0; k + 1 < 4; ++k) EXPECT_GE(d.values(k), d.values(k + 1) - 1e-12);
    const auto r = diameter_sequence(b.rotated(oracle::random_rotation<4>(eng)));
    EXPECT_LT((r.values - d.values).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, d.values(0)));
  }
}

TEST(DiameterSequence, PolytopesMatchOracleIn3D) {
  oracle::Engine eng(16);
  for (int i = 0; i < 300; ++i) {
    const auto b = oracle::random_polytope<3>(eng);
    const auto ref = oracle::point_set_diameters<3>(b.as_polytope()->vertices);
    EXPECT_LT((diameter_sequence(b).values - ref.values).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(BoundingRectangle, UnitDisk) {
  const auto b = ConvexBody<2>::ball(Vec<2>::Zero(), 1.0);
  const auto r = bounding_rectangle(b);
  EXPECT_TRUE(r.half_lengths.isApprox(Vec<2>(2, 2)));
  EXPECT_DOUBLE_EQ(r.volume(), 16.0);
  EXPECT_LE(r.volume(), 4.0 * 2.0 * volume(b));
}

TEST(BoundingRectangle, TriangleContainment) {
  const auto t = ConvexBody<2>::polytope(right_triangle_vertices(4.0, 0.5), Vec<2>::Zero());
  const auto r = bounding_rectangle(t);
  EXPECT_NEAR(r.half_lengths(0), 4.0, 1e-12);
  EXPECT_NEAR(r.half_lengths(1), 1.0, 1e-12);
  oracle::Engine eng(17);
  for (int i = 0; i < 1000; ++i) {
    const Vec<2> u = oracle::unit_vec<2>(eng);
    EXPECT_GE(r.support_value(u) - t.support_value(u), -1e-9);
  }
}

TEST(BoundingRectangle, VolumeBoundOnRandomBodies) {
  oracle::Engine eng(18);
  for (int i = 0; i < 300; ++i) {
    const auto b = oracle::random_polytope<3>(eng);
    EXPECT_LE(bounding_rectangle(b).volume(), 8.0 * 6.0 * volume(b) * (1 + 1e-12));
  }
}

TEST(Volume, Examples) {
  EXPECT_NEAR(volume(ConvexBody<2>::ball(Vec<2>::Zero(), 1.0)), kPi, 1e-12);
  EXPECT_NEAR(volume(ConvexBody<2>::ellipsoid(Vec<2>::Zero(), Vec<2>(2, 1))), 2 * kPi, 1e-12);
  PointSet<2> tri(2, 3);
  tri << 0, 3, 0,
         0, 0, 4;
  EXPECT_NEAR(volume(ConvexBody<2>::polytope(tri)), 6.0, 1e-12);
  PointSet<3> tet(3, 4);
  tet << 0, 1, 0, 0,
         0, 0, 1, 0,
         0, 0, 0, 1;
  EXPECT_NEAR(volume(ConvexBody<3>::polytope(tet)), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(volume(ConvexBody<4>::ball(Vec<4>::Zero(), 1.0)), kPi * kPi / 2, 1e-12);
}

TEST(Volume, EllipseMonteCarlo) {
  oracle::Engine eng(19);
  std::uniform_real_distribution<double> x(-2, 2), y(-1, 1);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double a = x(eng), b = y(eng);
    hits += a * a / 4 + b * b <= 1 ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / n;
  const double sigma = 8.0 * std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(8.0 * p, volume(ConvexBody<2>::ellipsoid(Vec<2>::Zero(), Vec<2>(2, 1))), 3 * sigma);
}

TEST(Validation, RejectsBadBodies) {
  EXPECT_THROW(ConvexBody<2>::ball(Vec<2>::Zero(), 0.0), InputError);
  Mat<2> skew;
  skew << 1, 0.1,
          0, 1;
  EXPECT_THROW(ConvexBody<2>::ellipsoid(Vec<2>::Zero(), Vec<2>(1, 1), skew), InputError);
  PointSet<2> line(2, 3);
  line << 0, 1, 2,
          0, 1, 2;
  EXPECT_THROW(ConvexBody<2>::polytope(line), InputError);
  PointSet<2> sliver(2, 3);
  sliver << 0, 10, 5,
            0, 0, 1e-5;
  EXPECT_THROW(validate(ConvexBody<2>::polytope(sliver)), InputError);
  EXPECT_THROW(validate(ConvexBody<2>::polytope(rect_4x3(), Vec<2>(9, 9))), InputError);
  EXPECT_NO_THROW(validate(ConvexBody<2>::polytope(rect_4x3(), Vec<2>(0, 0))));
  EXPECT_THROW(validate(ConvexBody<3>::ellipsoid(Vec<3>::Zero(), Vec<3>(1, 1, 1e-4))), InputError);
}

TEST(PointQuery, ContainsMatchesGeometry) {
  const auto e = ConvexBody<2>::ellipsoid(Vec<2>(1, 1), Vec<2>(2, 1));
  EXPECT_TRUE(contains(e, Vec<2>(2.9, 1.0)));
  EXPECT_FALSE(contains(e, Vec<2>(3.1, 1.0)));
  EXPECT_FALSE(contains(e, Vec<2>(1.0, 2.1)));
}
