#pragma once

#include "boolperc/convex_body.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/grain_law.hpp"
#include "boolperc/rng.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

namespace boolperc {

/// Observation box [0, L]^d; centres are sampled in [-M, L + M]^d.
struct Window {
  int d = 2;
  double side = 1.0;
  double margin = 0.0;

  void validate() const {
    if (d < 2 || d > kMaxDimension) throw InputError("window dimension out of range");
    if (!(side > 0) || !std::isfinite(side)) throw InputError("window side must be positive");
    if (!(margin >= 0) || !std::isfinite(margin)) throw InputError("window margin must be >= 0");
  }

  double enlarged_side() const { return side + 2.0 * margin; }
  double enlarged_volume() const { return std::pow(enlarged_side(), d); }

  template <int D>
  Aabb<D> box() const {
    return {Vec<D>::Zero(), Vec<D>::Constant(side)};
  }
};

struct Provenance {
  std::uint64_t root_seed = 0;
  std::uint64_t replica = 0;
  std::uint64_t stream = 0;
};

template <int D>
struct Vertex {
  Vec<D> location;
  /// The grain in world coordinates; its reference point is `location`.
  ConvexBody<D> grain;
};

/// One realisation of the marked process in a window.
template <int D>
struct BooleanSample {
  Window window;
  double intensity = 0.0;
  std::vector<Vertex<D>> vertices;
  Provenance seed;
  bool palm = false;
  std::size_t palm_index = 0;
  /// Fraction of grains whose bounding box crosses the window boundary.
  double straddling_fraction = 0.0;
};

struct ProcessOptions {
  /// Refuse samples whose expected vertex count exceeds this.
  double max_expected_vertices = 1e7;
};

namespace detail {

template <int D>
double straddling_fraction(const std::vector<Vertex<D>>& vs, const Window& w) {
  if (vs.empty()) return 0.0;
  const Aabb<D> box = w.template box<D>();
  std::size_t n = 0;
  for (const auto& v : vs) {
    const Aabb<D> b = v.grain.aabb();
    const bool inside = (b.lo.array() >= box.lo.array()).all() && (b.hi.array() <= box.hi.array()).all();
    if (b.overlaps(box) && !inside) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(vs.size());
}

}  // namespace detail

/// Samples N ~ Poisson(u (L + 2M)^d) uniform locations in the enlarged
/// window, each carrying an independent grain from `law`. The result is a
/// pure function of (window, u, law, provenance).
template <int D>
BooleanSample<D> sample_process(const Window& window, double intensity, const GrainLaw& law,
                                const Provenance& seed, const ProcessOptions& opt = {}) {
  window.validate();
  if (window.d != D || law.dimension() != D) throw InputError("dimension mismatch in sample_process");
  if (!(intensity > 0) || !std::isfinite(intensity)) throw InputError("intensity must be positive");
  const double mean = intensity * window.enlarged_volume();
  if (mean > opt.max_expected_vertices)
    throw ResourceError("expected vertex count " + std::to_string(mean) + " exceeds cap " +
                        std::to_string(opt.max_expected_vertices));

  CounterRng rng(seed.root_seed, seed.replica, seed.stream);
  std::poisson_distribution<long long> count_dist(mean);
  const long long n = count_dist(rng);

  BooleanSample<D> s;
  s.window = window;
  s.intensity = intensity;
  s.seed = seed;
  s.vertices.reserve(static_cast<std::size_t>(n));
  const double lo = -window.margin;
  const double len = window.enlarged_side();
  for (long long i = 0; i < n; ++i) {
    Vec<D> x;
    for (int j = 0; j < D; ++j) x(j) = lo + len * rng.uniform();
    ConvexBody<D> g = sample<D>(law, rng).translated(x);
    s.vertices.push_back({x, std::move(g)});
  }
  s.straddling_fraction = detail::straddling_fraction(s.vertices, window);
  return s;
}

/// Adds the Palm vertex at `location` (the origin by default) with an
/// independent grain. Fails if the sample already has one.
template <int D>
void add_palm_grain(BooleanSample<D>& s, const GrainLaw& law, CounterRng& rng,
                    const Vec<D>& location = Vec<D>::Zero()) {
  if (s.palm) throw InputError("sample already carries a Palm vertex");
  s.vertices.push_back({location, sample<D>(law, rng).translated(location)});
  s.palm = true;
  s.palm_index = s.vertices.size() - 1;
}

/// 64-bit FNV-1a over a canonical little-endian serialisation.
class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= c[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

template <int D>
std::uint64_t digest(const BooleanSample<D>& s) {
  Fnv1a h;
  h.u64(D);
  h.f64(s.window.side);
  h.f64(s.window.margin);
  h.f64(s.intensity);
  h.u64(s.seed.root_seed);
  h.u64(s.seed.replica);
  h.u64(s.seed.stream);
  h.u64(s.palm ? 1 : 0);
  h.u64(s.palm_index);
  h.u64(s.vertices.size());
  for (const auto& v : s.vertices) {
    for (int i = 0; i < D; ++i) h.f64(v.location(i));
    const auto& g = v.grain;
    h.u64(static_cast<std::uint64_t>(g.kind()));
    for (int i = 0; i < D; ++i) h.f64(g.center()(i));
    if (const auto* b = g.as_ball()) {
      h.f64(b->radius);
    } else if (const auto* e = g.as_ellipsoid()) {
      for (int i = 0; i < D; ++i) h.f64(e->semi_axes(i));
      for (int i = 0; i < D * D; ++i) h.f64(e->frame.data()[i]);
    } else if (const auto* p = g.as_polytope()) {
      h.u64(static_cast<std::uint64_t>(p->vertices.cols()));
      for (Eigen::Index i = 0; i < p->vertices.size(); ++i) h.f64(p->vertices.data()[i]);
    }
  }
  return h.value();
}

// ---------------------------------------------------------------------------
// Margin selection

/// Tail of the reach (largest distance from the reference point to the
/// grain): P(reach >= t) = 1 for t < kink and sum_i coef_i t^(-gamma_i)
/// beyond. A bounded reach has no terms and kink = max reach.
struct ReachTail {
  double kink = 0.0;
  std::vector<std::pair<double, double>> terms;  // (coef, gamma)

  bool bounded() const { return terms.empty(); }
  double tail_index() const {
    double g = kInf;
    for (const auto& [c, gamma] : terms)
      if (c > 0) g = std::min(g, gamma);
    return g;
  }
  double probability(double t) const {
    if (t < kink) return 1.0;
    if (bounded()) return 0.0;
    double p = 0.0;
    for (const auto& [c, gamma] : terms) p += c * std::pow(t, -gamma);
    return std::clamp(p, 0.0, 1.0);
  }
};

/// Exact reach tail of each family (for triangles the hypotenuse is used,
/// which bounds the reach from any corner).
inline ReachTail reach_tail(const GrainLaw& law) {
  return std::visit(
      [](const auto& f) -> ReachTail {
        using F = std::decay_t<decltype(f)>;
        ReachTail t;
        if constexpr (std::is_same_v<F, LongShortEllipsoid>) {
          // P(R/2 >= t) = (2t)^-alpha.
          t.kink = 0.5;
          if (f.m < f.d) t.terms.push_back({std::pow(2.0, -f.alpha), f.alpha});
        } else if constexpr (std::is_same_v<F, IndependentAxesEllipsoid>) {
          // 1 - prod (1 - (2t)^-beta_i), expanded by inclusion-exclusion.
          t.kink = 0.5;
          const int d = f.d;
          for (unsigned mask = 1; mask < (1u << d); ++mask) {
            double gamma = 0.0;
            int bits = 0;
            for (int i = 0; i < d; ++i)
              if (mask & (1u << i)) gamma += f.beta[i], ++bits;
            t.terms.push_back({(bits % 2 ? 1.0 : -1.0) * std::pow(2.0, -gamma), gamma});
          }
        } else if constexpr (std::is_same_v<F, DependentAxesEllipsoid>) {
          t.kink = 0.5;
          if (f.beta.back() > 0)
            t.terms.push_back({std::pow(2.0, -1.0 / f.beta.back()), 1.0 / f.beta.back()});
        } else if constexpr (std::is_same_v<F, RightTriangle>) {
          t.kink = 1.0;
          t.terms.push_back({1.0, f.alpha});
        } else {
          t.kink = std::visit([](const auto& b) { return b.reach(); }, f.body);
        }
        return t;
      },
      law.family);
}

struct MarginRecommendation {
  double margin = 0.0;
  /// Expected omitted grains reaching the window over the expected count
  /// of grains centred in it; infinite when the tail is not integrable.
  double residual = 0.0;
  bool residual_bias = false;
};

namespace detail {

/// (1 / L^d) * integral_M^inf S'(t) P(reach >= t) dt where
/// S(t) = Vol([0,L]^d + tB) - L^d = sum_{j>=1} C(d,j) L^(d-j) kappa_j t^j.
inline double omitted_fraction(const ReachTail& tail, int d, double side, double margin) {
  auto binom = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  double total = 0.0;
  for (int j = 1; j <= d; ++j) {
    const double coef = binom(d, j) * std::pow(side, d - j) * unit_ball_volume(j);
    // Part where the reach probability is 1.
    if (margin < tail.kink) total += coef * (std::pow(tail.kink, j) - std::pow(margin, j));
    const double a = std::max(margin, tail.kink);
    for (const auto& [c, gamma] : tail.terms) {
      if (!(gamma > j)) return kInf;
      total += coef * j * c * std::pow(a, j - gamma) / (gamma - j);
    }
  }
  return total / std::pow(side, d);
}

}  // namespace detail

/// Smallest margin M for which grains centred farther than M from the
/// window contribute at most `miss_prob` times the expected in-window
/// count. Uses the closed-form reach tail; a non-integrable tail (index
/// <= d) returns M = L/2 with the residual-bias flag set.
inline MarginRecommendation recommended_margin(const GrainLaw& law, const Window& window,
                                               double miss_prob) {
  law.validate();
  window.validate();
  if (!(miss_prob > 0 && miss_prob < 1)) throw InputError("miss probability must lie in (0, 1)");
  const ReachTail tail = reach_tail(law);
  MarginRecommendation rec;
  if (tail.bounded()) {
    rec.margin = tail.kink;
    return rec;
  }
  if (!(tail.tail_index() > window.d)) {
    rec.margin = 0.5 * window.side;
    rec.residual = kInf;
    rec.residual_bias = true;
    return rec;
  }
  auto f = [&](double m) { return detail::omitted_fraction(tail, window.d, window.side, m); };
  if (f(0.0) <= miss_prob) {
    rec.margin = 0.0;
    rec.residual = f(0.0);
    return rec;
  }
  double hi = std::max(tail.kink, 1e-3);
  while (f(hi) > miss_prob) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > miss_prob ? lo : hi) = mid;
  }
  rec.margin = hi;
  rec.residual = f(hi);
  return rec;
}

}  // namespace boolperc
