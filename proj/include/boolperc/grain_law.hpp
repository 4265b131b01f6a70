#pragma once

#include "boolperc/convex_body.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace boolperc {

inline constexpr int kMaxDimension = 5;

/// A body of any supported dimension.
using AnyBody = std::variant<ConvexBody<2>, ConvexBody<3>, ConvexBody<4>, ConvexBody<5>>;

inline int dimension_of(const AnyBody& b) { return static_cast<int>(b.index()) + 2; }

// Grain families. Axis "lengths" are full lengths: an axis of length R
// gives a semi-axis R/2.

/// d-m long axes of Pareto(alpha) length R, m short axes of length 1.
struct LongShortEllipsoid {
  int d = 2;
  int m = 1;
  double alpha = 1.5;
};

/// Axes of independent Pareto(beta_i) lengths.
struct IndependentAxesEllipsoid {
  int d = 2;
  std::vector<double> beta;
};

/// Axes of lengths U^(-beta_i) for a single U ~ Uniform(0,1); beta ascending.
struct DependentAxesEllipsoid {
  int d = 2;
  std::vector<double> beta;
};

/// Right triangle with Pareto(alpha) hypotenuse R and area R^(1+beta)/4,
/// reference point at a uniformly chosen corner. d = 2.
struct RightTriangle {
  double alpha = 1.5;
  double beta = 0.5;
};

/// A deterministic body, uniformly rotated about its reference point.
struct FixedBody {
  AnyBody body;
};

using GrainFamily = std::variant<LongShortEllipsoid, IndependentAxesEllipsoid,
                                 DependentAxesEllipsoid, RightTriangle, FixedBody>;

struct GrainLaw {
  GrainFamily family;

  int dimension() const {
    return std::visit(
        [](const auto& f) -> int {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, RightTriangle>) return 2;
          else if constexpr (std::is_same_v<F, FixedBody>) return dimension_of(f.body);
          else return f.d;
        },
        family);
  }

  std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, LongShortEllipsoid>) return "long-short";
          else if constexpr (std::is_same_v<F, IndependentAxesEllipsoid>) return "independent-axes";
          else if constexpr (std::is_same_v<F, DependentAxesEllipsoid>) return "dependent-axes";
          else if constexpr (std::is_same_v<F, RightTriangle>) return "right-triangle";
          else return "fixed";
        },
        family);
  }

  void validate() const {
    auto check_d = [](int d) {
      if (d < 2 || d > kMaxDimension)
        throw InputError("dimension must be in [2, " + std::to_string(kMaxDimension) + "]");
    };
    std::visit(
        [&](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, LongShortEllipsoid>) {
            check_d(f.d);
            if (f.m < 0 || f.m > f.d) throw InputError("long-short: need 0 <= m <= d");
            if (!(f.alpha > 0) || !std::isfinite(f.alpha)) throw InputError("long-short: need alpha > 0");
          } else if constexpr (std::is_same_v<F, IndependentAxesEllipsoid>) {
            check_d(f.d);
            if (static_cast<int>(f.beta.size()) != f.d)
              throw InputError("independent-axes: need d tail indices");
            for (double b : f.beta)
              if (!(b > 0) || !std::isfinite(b)) throw InputError("independent-axes: need beta_i > 0");
          } else if constexpr (std::is_same_v<F, DependentAxesEllipsoid>) {
            check_d(f.d);
            if (static_cast<int>(f.beta.size()) != f.d)
              throw InputError("dependent-axes: need d exponents");
            for (std::size_t i = 0; i < f.beta.size(); ++i) {
              if (!(f.beta[i] >= 0) || !std::isfinite(f.beta[i]))
                throw InputError("dependent-axes: need beta_i >= 0");
              if (i > 0 && f.beta[i] < f.beta[i - 1])
                throw InputError("dependent-axes: beta must be non-decreasing");
            }
          } else if constexpr (std::is_same_v<F, RightTriangle>) {
            if (!(f.alpha > 0) || !std::isfinite(f.alpha)) throw InputError("right-triangle: need alpha > 0");
            if (!(f.beta > 0 && f.beta < 1)) throw InputError("right-triangle: need 0 < beta < 1");
          } else {
            std::visit([](const auto& b) { ::boolperc::validate(b); }, f.body);
          }
        },
        family);
  }
};

/// Three-valued moment flag.
enum class Flag { False, True, Unknown };

inline const char* to_string(Flag f) {
  switch (f) {
    case Flag::False: return "false";
    case Flag::True: return "true";
    case Flag::Unknown: return "unknown";
  }
  return "?";
}

/// Tail indices alpha_1 <= ... <= alpha_d of the diameters (infinity for
/// bounded diameters) plus moment flags for Vol in L1, Vol in L2 and
/// D(1) in L^d.
struct TailProfile {
  int d = 2;
  std::vector<double> alpha;
  Flag vol_l1 = Flag::Unknown;
  Flag vol_l2 = Flag::Unknown;
  Flag diam_ld = Flag::Unknown;

  void validate() const {
    if (d < 2) throw InputError("tail profile: d >= 2 required");
    if (static_cast<int>(alpha.size()) != d) throw InputError("tail profile: need d tail indices");
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (!(alpha[i] > 0)) throw InputError("tail profile: tail indices must be positive");
      if (i > 0 && alpha[i] < alpha[i - 1]) throw InputError("tail profile: tail indices must be non-decreasing");
    }
  }
};

/// Strict comparison a > b with a relative tie band; ties give Unknown.
inline Flag strictly_greater(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) {
    if (a == b) return Flag::Unknown;
    return a > b ? Flag::True : Flag::False;
  }
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  if (a > b + tol) return Flag::True;
  if (a < b - tol) return Flag::False;
  return Flag::Unknown;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed-form tail profile of a family.
inline TailProfile theoretical_tail_profile(const GrainLaw& law) {
  law.validate();
  TailProfile p;
  p.d = law.dimension();
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LongShortEllipsoid>) {
          const int long_axes = f.d - f.m;
          for (int k = 1; k <= f.d; ++k) p.alpha.push_back(k <= long_axes ? f.alpha : kInf);
          if (long_axes == 0) {
            p.vol_l1 = p.vol_l2 = p.diam_ld = Flag::True;
          } else {
            // Vol ~ R^(d-m), D(1) = R.
            p.vol_l1 = strictly_greater(f.alpha, long_axes);
            p.vol_l2 = strictly_greater(f.alpha, 2.0 * long_axes);
            p.diam_ld = strictly_greater(f.alpha, f.d);
          }
        } else if constexpr (std::is_same_v<F, IndependentAxesEllipsoid>) {
          std::vector<double> b = f.beta;
          std::sort(b.begin(), b.end());
          double acc = 0.0;
          for (double bi : b) p.alpha.push_back(acc += bi);
          // E[Vol] = prod E[R_i]; D(1) = max R_i has index beta_min.
          p.vol_l1 = strictly_greater(b.front(), 1.0);
          p.vol_l2 = strictly_greater(b.front(), 2.0);
          p.diam_ld = strictly_greater(b.front(), f.d);
        } else if constexpr (std::is_same_v<F, DependentAxesEllipsoid>) {
          for (int k = 1; k <= f.d; ++k) {
            const double b = f.beta[f.d - k];
            p.alpha.push_back(b > 0 ? 1.0 / b : kInf);
          }
          double sum = 0.0;
          for (double b : f.beta) sum += b;
          if (sum == 0.0) {
            p.vol_l1 = p.vol_l2 = p.diam_ld = Flag::True;
          } else {
            // Vol ~ U^(-sum beta) has tail index 1 / sum beta.
            p.vol_l1 = strictly_greater(1.0, sum);
            p.vol_l2 = strictly_greater(0.5, sum);
            p.diam_ld = f.beta.back() > 0 ? strictly_greater(1.0 / f.beta.back(), f.d) : Flag::True;
          }
        } else if constexpr (std::is_same_v<F, RightTriangle>) {
          // D(1) = R, D(2) = R^beta / 2, Vol = R^(1+beta) / 4.
          p.alpha = {f.alpha, f.alpha / f.beta};
          p.vol_l1 = strictly_greater(f.alpha, 1.0 + f.beta);
          p.vol_l2 = strictly_greater(f.alpha, 2.0 + 2.0 * f.beta);
          p.diam_ld = strictly_greater(f.alpha, 2.0);
        } else {
          p.alpha.assign(p.d, kInf);
          p.vol_l1 = p.vol_l2 = p.diam_ld = Flag::True;
        }
      },
      law.family);
  return p;
}

/// Haar-distributed rotation in SO(D): QR of a Gaussian matrix with the
/// signs of R's diagonal absorbed into Q, then a column flip to make the
/// determinant +1.
template <int D>
Mat<D> haar_rotation(CounterRng& rng) {
  std::normal_distribution<double> normal;
  Mat<D> g;
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat<D>> qr(g);
  Mat<D> q = qr.householderQ();
  const Mat<D> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int i = 0; i < D; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

/// P(R >= x) = x^(-alpha) for x >= 1.
inline double sample_pareto(double alpha, CounterRng& rng) {
  return std::pow(rng.uniform_open0(), -1.0 / alpha);
}

/// Right triangle with hypotenuse from (0,0) to (R,0) and the right-angle
/// corner at height R^beta / 2 above it, so that the area is
/// R^(1+beta) / 4. Requires R >= 1.
inline PointSet<2> right_triangle_vertices(double hypotenuse, double beta) {
  const double r = hypotenuse;
  const double h = 0.5 * std::pow(r, beta);
  if (!(r >= 2.0 * h)) throw InputError("right triangle: height exceeds half the hypotenuse");
  // Foot of the altitude splits the hypotenuse into s and R - s with s (R - s) = h^2.
  const double s = 0.5 * (r - std::sqrt(std::max(0.0, r * r - 4.0 * h * h)));
  PointSet<2> v(2, 3);
  v << 0.0, r, s,
       0.0, 0.0, h;
  return v;
}

/// The unrotated grain with reference point at the origin, drawing only
/// the family's size variables from `rng`.
template <int D>
ConvexBody<D> sample_unrotated(const GrainLaw& law, CounterRng& rng) {
  if (law.dimension() != D) throw InputError("grain law dimension does not match");
  return std::visit(
      [&](const auto& f) -> ConvexBody<D> {
        using F = std::decay_t<decltype(f)>;
        const Vec<D> origin = Vec<D>::Zero();
        if constexpr (std::is_same_v<F, LongShortEllipsoid>) {
          const double r = f.m < f.d ? sample_pareto(f.alpha, rng) : 1.0;
          Vec<D> semi;
          for (int i = 0; i < D; ++i) semi(i) = 0.5 * (i < f.d - f.m ? r : 1.0);
          return ConvexBody<D>::ellipsoid(origin, semi);
        } else if constexpr (std::is_same_v<F, IndependentAxesEllipsoid>) {
          Vec<D> semi;
          for (int i = 0; i < D; ++i) semi(i) = 0.5 * sample_pareto(f.beta[i], rng);
          return ConvexBody<D>::ellipsoid(origin, semi);
        } else if constexpr (std::is_same_v<F, DependentAxesEllipsoid>) {
          const double u = rng.uniform_open0();
          Vec<D> semi;
          for (int i = 0; i < D; ++i) semi(i) = 0.5 * std::pow(u, -f.beta[i]);
          return ConvexBody<D>::ellipsoid(origin, semi);
        } else if constexpr (std::is_same_v<F, RightTriangle>) {
          if constexpr (D == 2) {
            const double r = sample_pareto(f.alpha, rng);
            const PointSet<2> v = right_triangle_vertices(r, f.beta);
            const int corner = static_cast<int>(rng.uniform() * 3.0);
            const Vec<2> c = v.col(std::min(corner, 2));
            return ConvexBody<2>::polytope(v.colwise() - c, origin);
          } else {
            throw InputError("right-triangle law is two-dimensional");
          }
        } else {
          const auto& body = std::get<ConvexBody<D>>(f.body);
          return body.translated(-body.center());
        }
      },
      law.family);
}

/// A grain drawn from `law`, uniformly rotated about its reference point,
/// which sits at the origin.
template <int D>
ConvexBody<D> sample(const GrainLaw& law, CounterRng& rng) {
  ConvexBody<D> body = sample_unrotated<D>(law, rng);
  return body.rotated(haar_rotation<D>(rng));
}

}  // namespace boolperc
