#pragma once

#include "boolperc/errors.hpp"
#include "boolperc/grain_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace boolperc {

enum class Density { Dense, Sparse, BoundaryUnknown };
enum class Robustness { Robust, NonRobust, Inconclusive };

inline const char* to_string(Density d) {
  switch (d) {
    case Density::Dense: return "Dense";
    case Density::Sparse: return "Sparse";
    case Density::BoundaryUnknown: return "BoundaryUnknown";
  }
  return "?";
}

inline const char* to_string(Robustness r) {
  switch (r) {
    case Robustness::Robust: return "Robust";
    case Robustness::NonRobust: return "NonRobust";
    case Robustness::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct Verdict {
  Density density = Density::BoundaryUnknown;
  Robustness robustness = Robustness::Inconclusive;
  /// Fired rules, e.g. "robust-alpha-k1", "nonrobust-diam-ld",
  /// "dense-implies-robust", "sparse-vol-l1".
  std::vector<std::string> reasons;
  /// Smallest k with alpha_k < min(2k, d), 0 if none.
  int witness_k = 0;
};

/// Sparse iff Vol in L1.
inline Density is_sparse(const TailProfile& p) {
  switch (p.vol_l1) {
    case Flag::True: return Density::Sparse;
    case Flag::False: return Density::Dense;
    case Flag::Unknown: return Density::BoundaryUnknown;
  }
  return Density::BoundaryUnknown;
}

namespace detail {

inline std::string format_k(const char* prefix, int k) { return prefix + std::to_string(k); }

/// Rejects flag combinations that no distribution can have.
inline void check_consistency(const TailProfile& p) {
  for (int k = 1; k <= p.d; ++k) {
    const double a = p.alpha[k - 1];
    if (p.vol_l2 == Flag::True && strictly_greater(2.0 * k, a) == Flag::True)
      throw ConsistencyError("Vol in L2 requires alpha_k >= 2k, but alpha_" + std::to_string(k) +
                             " = " + std::to_string(a));
    if (p.vol_l1 == Flag::True && strictly_greater(static_cast<double>(k), a) == Flag::True)
      throw ConsistencyError("Vol in L1 requires alpha_k >= k, but alpha_" + std::to_string(k) +
                             " = " + std::to_string(a));
  }
  if (p.diam_ld == Flag::True && strictly_greater(p.d, p.alpha[0]) == Flag::True)
    throw ConsistencyError("D(1) in L^d requires alpha_1 >= d");
  if (p.vol_l2 == Flag::True && p.vol_l1 == Flag::False)
    throw ConsistencyError("Vol in L2 but not in L1");
  if (p.diam_ld == Flag::True && p.vol_l1 == Flag::False)
    throw ConsistencyError("D(1) in L^d but Vol not in L1");
}

}  // namespace detail

/// Robust if some alpha_k < min(2k, d); non-robust if Vol in L2 and every
/// alpha_k > 2k, or if D(1) in L^d. All comparisons are strict, so
/// boundary points are Inconclusive. An unknown Vol in L1 flag is set when
/// Vol in L2 or D(1) in L^d holds. A dense law covers the space and is
/// reported Robust.
inline Verdict classify(const TailProfile& profile) {
  profile.validate();
  // Vol in L2 or D(1) in L^d forces Vol in L1.
  TailProfile p = profile;
  if (p.vol_l1 == Flag::Unknown && (p.vol_l2 == Flag::True || p.diam_ld == Flag::True))
    p.vol_l1 = Flag::True;
  detail::check_consistency(p);
  Verdict v;
  v.density = is_sparse(p);

  for (int k = 1; k <= p.d; ++k) {
    const double bound = std::min(2.0 * k, static_cast<double>(p.d));
    if (strictly_greater(bound, p.alpha[k - 1]) == Flag::True) {
      v.witness_k = k;
      break;
    }
  }

  bool all_above = true;
  for (int k = 1; k <= p.d; ++k)
    if (strictly_greater(p.alpha[k - 1], 2.0 * k) != Flag::True) all_above = false;
  const bool nonrobust_l2 = p.vol_l2 == Flag::True && all_above;
  const bool nonrobust_ld = p.diam_ld == Flag::True;

  if (v.witness_k > 0 && (nonrobust_l2 || nonrobust_ld))
    throw ConsistencyError("profile satisfies both the robust and the non-robust rule");

  if (v.witness_k > 0) {
    v.robustness = Robustness::Robust;
    v.reasons.push_back(detail::format_k("robust-alpha-k", v.witness_k));
  } else if (nonrobust_l2 || nonrobust_ld) {
    v.robustness = Robustness::NonRobust;
    if (nonrobust_l2) v.reasons.push_back("nonrobust-vol-l2-alpha");
    if (nonrobust_ld) v.reasons.push_back("nonrobust-diam-ld");
  } else if (v.density == Density::Dense) {
    v.robustness = Robustness::Robust;
    v.reasons.push_back("dense-implies-robust");
  }
  if (v.density == Density::Sparse) v.reasons.push_back("sparse-vol-l1");
  if (v.density == Density::Dense) v.reasons.push_back("dense-vol-l1");
  return v;
}

/// "Sparse, Robust (witness k=1)".
inline std::string summary(const Verdict& v) {
  std::string s = std::string(to_string(v.density)) + ", " + to_string(v.robustness);
  if (v.witness_k > 0) s += " (witness k=" + std::to_string(v.witness_k) + ")";
  return s;
}

/// Scale sequence f_0 < f_1 < ... < f_n with
/// f_j = f_{j-1}^(min(d-k, k) / (alpha_k - k) - eps). For alpha_k = k the
/// geometric fallback f_0^1, ..., f_0^n is returned.
inline std::vector<double> threshold_sequence(int d, int k, double alpha_k, double eps, double f0,
                                              int n) {
  if (k < 1 || k >= d) throw ParameterError("threshold sequence needs 1 <= k < d");
  if (!(f0 > 1)) throw ParameterError("threshold sequence needs f0 > 1");
  if (n < 1) throw ParameterError("threshold sequence needs n >= 1");
  std::vector<double> f;
  if (strictly_greater(alpha_k, k) == Flag::Unknown) {
    for (int j = 1; j <= n; ++j) f.push_back(std::pow(f0, j));
  } else {
    if (!(eps > 0)) throw ParameterError("threshold sequence needs eps > 0");
    if (!(alpha_k > k))
      throw ParameterError("threshold sequence needs alpha_k > k (otherwise the exponent is negative)");
    const double exponent = std::min(d - k, k) / (alpha_k - k) - eps;
    if (!(exponent > 1))
      throw ParameterError("exponent min(d-k,k)/(alpha_k-k) - eps = " + std::to_string(exponent) +
                           " must exceed 1 for an increasing sequence");
    f.push_back(f0);
    for (int j = 1; j <= n; ++j) f.push_back(std::pow(f.back(), exponent));
  }
  for (double x : f)
    if (!std::isfinite(x)) throw ParameterError("threshold sequence overflows double range");
  return f;
}

// ---------------------------------------------------------------------------
// Regime tables

/// Shortest "%g" rendering; "inf" for infinity.
inline std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct RegimeRow {
  std::string family;
  int d = 2;
  std::string params;
  std::string alpha;
  Verdict verdict;
};

inline std::string regime_csv_header() { return "family,d,params,alpha,density,robustness"; }

inline std::string to_csv(const RegimeRow& r) {
  return r.family + "," + std::to_string(r.d) + "," + r.params + "," + r.alpha + "," +
         to_string(r.verdict.density) + "," + to_string(r.verdict.robustness);
}

/// A named parameter point of a family.
struct RegimePoint {
  GrainLaw law;
  std::string params;
};

inline RegimeRow regime_row(const RegimePoint& pt) {
  const TailProfile p = theoretical_tail_profile(pt.law);
  RegimeRow r;
  r.family = pt.law.name();
  r.d = p.d;
  r.params = pt.params;
  for (std::size_t i = 0; i < p.alpha.size(); ++i) r.alpha += (i ? " " : "") + format_g(p.alpha[i]);
  r.verdict = classify(p);
  return r;
}

inline std::vector<RegimeRow> regime_table(const std::vector<RegimePoint>& grid) {
  std::vector<RegimeRow> rows;
  rows.reserve(grid.size());
  for (const auto& pt : grid) rows.push_back(regime_row(pt));
  return rows;
}

namespace regimes {

inline std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) v.push_back(lo + i * step);
  return v;
}

/// d = 2..4, m = 0..d, alpha = 0.5, 1, ..., 2d.
inline std::vector<RegimePoint> long_short() {
  std::vector<RegimePoint> g;
  for (int d = 2; d <= 4; ++d)
    for (int m = 0; m <= d; ++m)
      for (double a : steps(0.5, 2.0 * d, 0.5))
        g.push_back({GrainLaw{LongShortEllipsoid{d, m, a}},
                     "m=" + std::to_string(m) + ";alpha=" + format_g(a)});
  return g;
}

/// d = 2, 3; non-decreasing beta from {0.5, 1, ..., 3}.
inline std::vector<RegimePoint> independent_axes() {
  const std::vector<double> values = steps(0.5, 3.0, 0.5);
  std::vector<RegimePoint> g;
  for (int d = 2; d <= 3; ++d) {
    std::vector<std::size_t> idx(d, 0);
    while (true) {
      std::vector<double> beta;
      std::string params;
      for (int i = 0; i < d; ++i) {
        beta.push_back(values[idx[i]]);
        params += (i ? ";" : "") + std::string("beta") + std::to_string(i + 1) + "=" +
                  format_g(values[idx[i]]);
      }
      g.push_back({GrainLaw{IndependentAxesEllipsoid{d, beta}}, params});
      int i = d - 1;
      while (i >= 0 && idx[i] == values.size() - 1) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < d; ++j) idx[j] = idx[i];
    }
  }
  return g;
}

/// Slice A: beta_d = 1/alpha, other beta = 1/(2 alpha); d = 4,
/// alpha = 0.25, 0.5, ..., 6.
/// Slice B: beta_1 = 1/(2 alpha), other beta = 1/alpha; d = 2..4,
/// alpha = 0.25, ..., 2d.
inline std::vector<RegimePoint> dependent_axes() {
  std::vector<RegimePoint> g;
  for (double a : steps(0.25, 6.0, 0.25)) {
    const int d = 4;
    std::vector<double> beta(d, 1.0 / (2.0 * a));
    beta[d - 1] = 1.0 / a;
    g.push_back({GrainLaw{DependentAxesEllipsoid{d, beta}}, "slice=A;alpha=" + format_g(a)});
  }
  for (int d = 2; d <= 4; ++d)
    for (double a : steps(0.25, 2.0 * d, 0.25)) {
      std::vector<double> beta(d, 1.0 / a);
      beta[0] = 1.0 / (2.0 * a);
      g.push_back({GrainLaw{DependentAxesEllipsoid{d, beta}}, "slice=B;alpha=" + format_g(a)});
    }
  return g;
}

/// alpha = 0.5, 0.75, ..., 3.5; beta in {0.25, 0.5, 0.75}.
inline std::vector<RegimePoint> right_triangle() {
  std::vector<RegimePoint> g;
  for (double b : {0.25, 0.5, 0.75})
    for (double a : steps(0.5, 3.5, 0.25))
      g.push_back({GrainLaw{RightTriangle{a, b}}, "alpha=" + format_g(a) + ";beta=" + format_g(b)});
  return g;
}

/// Every standard grid, in a fixed order.
inline std::vector<RegimePoint> standard() {
  std::vector<RegimePoint> g;
  for (auto part : {long_short(), independent_axes(), dependent_axes(), right_triangle()})
    g.insert(g.end(), part.begin(), part.end());
  return g;
}

/// Grid of one family by name ("long-short", "independent-axes",
/// "dependent-axes", "right-triangle"); "all" gives every grid.
inline std::vector<RegimePoint> by_name(const std::string& family) {
  if (family == "long-short") return long_short();
  if (family == "independent-axes") return independent_axes();
  if (family == "dependent-axes") return dependent_axes();
  if (family == "right-triangle") return right_triangle();
  if (family == "all") return standard();
  throw InputError("unknown family '" + family + "'");
}

}  // namespace regimes

}  // namespace boolperc
