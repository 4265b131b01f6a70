#pragma once

#include "boolperc/convex_body.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/grain_law.hpp"
#include "boolperc/process.hpp"

#include <json.hpp>

#include <cstdio>
#include <initializer_list>
#include <set>
#include <string>

namespace boolperc::io {

using Json = nlohmann::json;

inline constexpr int kSnapshotVersion = 1;

/// Throws ConfigError if `j` is not an object or has keys outside `allowed`.
inline void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

inline long long integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<long long>();
}

inline std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number(x, where));
  return v;
}

template <int D>
Vec<D> to_vec(const std::vector<double>& v, const std::string& where) {
  if (static_cast<int>(v.size()) != D)
    throw ConfigError(where + ": expected " + std::to_string(D) + " coordinates");
  return Eigen::Map<const Vec<D>>(v.data());
}

template <class V>
Json to_array(const V& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// ---------------------------------------------------------------------------
// Bodies
//   {"kind": "ball", "center": [...], "radius": r}
//   {"kind": "ellipsoid", "center": [...], "semi_axes": [...], "frame": [[row], ...]}
//   {"kind": "polytope", "vertices": [[x], ...], "center": [...]}

template <int D>
Json to_json(const ConvexBody<D>& b) {
  Json j;
  j["kind"] = to_string(b.kind());
  j["center"] = to_array(b.center());
  if (const auto* s = b.as_ball()) {
    j["radius"] = s->radius;
  } else if (const auto* e = b.as_ellipsoid()) {
    j["semi_axes"] = to_array(e->semi_axes);
    Json rows = Json::array();
    for (int r = 0; r < D; ++r) rows.push_back(to_array(e->frame.row(r)));
    j["frame"] = rows;
  } else if (const auto* p = b.as_polytope()) {
    Json vs = Json::array();
    for (Eigen::Index c = 0; c < p->vertices.cols(); ++c) vs.push_back(to_array(p->vertices.col(c)));
    j["vertices"] = vs;
  }
  return j;
}

inline Json to_json(const AnyBody& b) {
  return std::visit([](const auto& x) { return to_json(x); }, b);
}

template <int D>
ConvexBody<D> body_from_json_d(const Json& j) {
  const std::string where = "body";
  const std::string kind = field(j, "kind", where).get<std::string>();
  try {
    if (kind == "ball") {
      require_keys(j, {"kind", "center", "radius"}, where);
      return ConvexBody<D>::ball(to_vec<D>(numbers(field(j, "center", where), where), where),
                                 number(field(j, "radius", where), where));
    }
    if (kind == "ellipsoid") {
      require_keys(j, {"kind", "center", "semi_axes", "frame"}, where);
      Mat<D> frame = Mat<D>::Identity();
      if (j.contains("frame")) {
        const Json& rows = j.at("frame");
        if (!rows.is_array() || static_cast<int>(rows.size()) != D)
          throw ConfigError(where + ": frame needs " + std::to_string(D) + " rows");
        for (int r = 0; r < D; ++r) frame.row(r) = to_vec<D>(numbers(rows[r], where), where).transpose();
      }
      return ConvexBody<D>::ellipsoid(to_vec<D>(numbers(field(j, "center", where), where), where),
                                      to_vec<D>(numbers(field(j, "semi_axes", where), where), where),
                                      frame);
    }
    if (kind == "polytope") {
      require_keys(j, {"kind", "center", "vertices"}, where);
      const Json& vs = field(j, "vertices", where);
      if (!vs.is_array() || vs.empty()) throw ConfigError(where + ": vertices must be a non-empty array");
      PointSet<D> pts(D, vs.size());
      for (std::size_t c = 0; c < vs.size(); ++c) pts.col(c) = to_vec<D>(numbers(vs[c], where), where);
      std::optional<Vec<D>> center;
      if (j.contains("center")) center = to_vec<D>(numbers(j.at("center"), where), where);
      return ConvexBody<D>::polytope(pts, center);
    }
  } catch (const InputError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown kind '" + kind + "'");
}

/// Dimension is taken from the length of "center" (or of the first vertex).
inline AnyBody body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("body: expected an object with 'kind'");
  std::size_t d = 0;
  if (j.contains("center") && j.at("center").is_array()) d = j.at("center").size();
  else if (j.contains("vertices") && j.at("vertices").is_array() && !j.at("vertices").empty() &&
           j.at("vertices")[0].is_array())
    d = j.at("vertices")[0].size();
  switch (d) {
    case 2: return body_from_json_d<2>(j);
    case 3: return body_from_json_d<3>(j);
    case 4: return body_from_json_d<4>(j);
    case 5: return body_from_json_d<5>(j);
    default: throw ConfigError("body: dimension must be in [2, 5]");
  }
}

// ---------------------------------------------------------------------------
// Grain laws
//   {"family": "long-short", "d": 2, "m": 1, "alpha": 1.5}
//   {"family": "independent-axes", "beta": [...]}
//   {"family": "dependent-axes", "beta": [...]}
//   {"family": "right-triangle", "alpha": 1.5, "beta": 0.5}
//   {"family": "fixed", "body": {...}}

inline Json to_json(const GrainLaw& law) {
  Json j;
  j["family"] = law.name();
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LongShortEllipsoid>) {
          j["d"] = f.d;
          j["m"] = f.m;
          j["alpha"] = f.alpha;
        } else if constexpr (std::is_same_v<F, IndependentAxesEllipsoid> ||
                             std::is_same_v<F, DependentAxesEllipsoid>) {
          j["beta"] = f.beta;
        } else if constexpr (std::is_same_v<F, RightTriangle>) {
          j["alpha"] = f.alpha;
          j["beta"] = f.beta;
        } else {
          j["body"] = to_json(f.body);
        }
      },
      law.family);
  return j;
}

inline GrainLaw law_from_json(const Json& j) {
  const std::string where = "law";
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::string family = field(j, "family", where).get<std::string>();
  GrainLaw law;
  if (family == "long-short") {
    require_keys(j, {"family", "d", "m", "alpha"}, where);
    law.family = LongShortEllipsoid{static_cast<int>(integer(field(j, "d", where), where)),
                                    static_cast<int>(integer(field(j, "m", where), where)),
                                    number(field(j, "alpha", where), where)};
  } else if (family == "independent-axes" || family == "dependent-axes") {
    require_keys(j, {"family", "beta"}, where);
    const std::vector<double> beta = numbers(field(j, "beta", where), where);
    const int d = static_cast<int>(beta.size());
    if (family == "independent-axes") law.family = IndependentAxesEllipsoid{d, beta};
    else law.family = DependentAxesEllipsoid{d, beta};
  } else if (family == "right-triangle") {
    require_keys(j, {"family", "alpha", "beta"}, where);
    law.family = RightTriangle{number(field(j, "alpha", where), where),
                               number(field(j, "beta", where), where)};
  } else if (family == "fixed") {
    require_keys(j, {"family", "body"}, where);
    law.family = FixedBody{body_from_json(field(j, "body", where))};
  } else {
    throw ConfigError(where + ": unknown family '" + family + "'");
  }
  try {
    law.validate();
  } catch (const InputError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return law;
}

// ---------------------------------------------------------------------------
// Sample snapshots

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <int D>
Json to_json(const BooleanSample<D>& s) {
  Json j;
  j["format"] = "boolperc-sample";
  j["version"] = kSnapshotVersion;
  j["d"] = D;
  j["window"] = {{"side", s.window.side}, {"margin", s.window.margin}};
  j["intensity"] = s.intensity;
  j["seed"] = {{"root", s.seed.root_seed}, {"replica", s.seed.replica}, {"stream", s.seed.stream}};
  j["palm"] = s.palm;
  if (s.palm) j["palm_index"] = s.palm_index;
  j["digest"] = hex64(digest(s));
  Json vs = Json::array();
  for (const auto& v : s.vertices) vs.push_back({{"location", to_array(v.location)}, {"grain", to_json(v.grain)}});
  j["vertices"] = vs;
  return j;
}

template <int D>
BooleanSample<D> sample_from_json(const Json& j) {
  const std::string where = "sample";
  require_keys(j, {"format", "version", "d", "window", "intensity", "seed", "palm", "palm_index",
                   "digest", "vertices"},
               where);
  if (field(j, "format", where) != "boolperc-sample") throw ConfigError(where + ": unknown format");
  if (integer(field(j, "version", where), where) != kSnapshotVersion)
    throw ConfigError(where + ": unsupported version");
  if (integer(field(j, "d", where), where) != D) throw ConfigError(where + ": dimension mismatch");
  BooleanSample<D> s;
  const Json& w = field(j, "window", where);
  require_keys(w, {"side", "margin"}, "sample.window");
  s.window = {D, number(field(w, "side", where), where), number(field(w, "margin", where), where)};
  s.intensity = number(field(j, "intensity", where), where);
  if (j.contains("seed")) {
    const Json& sd = j.at("seed");
    require_keys(sd, {"root", "replica", "stream"}, "sample.seed");
    s.seed = {sd.value("root", std::uint64_t{0}), sd.value("replica", std::uint64_t{0}),
              sd.value("stream", std::uint64_t{0})};
  }
  s.palm = j.value("palm", false);
  s.palm_index = j.value("palm_index", std::size_t{0});
  for (const auto& v : field(j, "vertices", where)) {
    require_keys(v, {"location", "grain"}, "sample.vertex");
    const Vec<D> x = to_vec<D>(numbers(field(v, "location", where), where), where);
    s.vertices.push_back({x, body_from_json_d<D>(field(v, "grain", where))});
  }
  if (s.palm && s.palm_index >= s.vertices.size()) throw ConfigError(where + ": palm_index out of range");
  return s;
}

}  // namespace boolperc::io
