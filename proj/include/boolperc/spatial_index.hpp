#pragma once

#include "boolperc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace boolperc {

/// Hierarchy of uniform grids for boxes of wildly different sizes. Level
/// l has cell size base * 2^l; each box lives at the lowest level whose
/// cell size is at least its largest extent, registered in every cell of
/// that level it overlaps (at most 2^D).
///
/// A pair query from box b scans only levels >= level(b), where b again
/// overlaps at most 2^D cells, so every overlapping pair is found from
/// its smaller member.
template <int D>
class SpatialIndex {
 public:
  SpatialIndex() = default;

  SpatialIndex(std::vector<Aabb<D>> boxes, double base_cell) : boxes_(std::move(boxes)) {
    base_ = base_cell > 0 && std::isfinite(base_cell) ? base_cell : 1.0;
    level_of_.resize(boxes_.size());
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
      const double ext = boxes_[i].max_extent();
      int level = 0;
      while (cell_size(level) < ext && level < 1000) ++level;
      level_of_[i] = level;
      if (level >= static_cast<int>(levels_.size())) levels_.resize(level + 1);
      for_each_cell(boxes_[i], level, [&](const Key& k) {
        levels_[level][k].push_back(static_cast<std::uint32_t>(i));
      });
    }
  }

  std::size_t size() const { return boxes_.size(); }
  int level_count() const { return static_cast<int>(levels_.size()); }
  int level_of(std::size_t i) const { return level_of_[i]; }
  double base_cell() const { return base_; }
  const Aabb<D>& box(std::size_t i) const { return boxes_[i]; }

  /// All pairs (i < j) whose boxes overlap, sorted.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> overlapping_pairs() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    std::vector<std::uint32_t> found;
    for (std::size_t b = 0; b < boxes_.size(); ++b) {
      found.clear();
      for (int level = level_of_[b]; level < level_count(); ++level) {
        for_each_cell(boxes_[b], level, [&](const Key& k) {
          const auto it = levels_[level].find(k);
          if (it == levels_[level].end()) return;
          for (std::uint32_t a : it->second) {
            if (a == b) continue;
            // Same-level pairs are reported from the smaller index only.
            if (level_of_[a] == level_of_[b] && a < b) continue;
            if (boxes_[a].overlaps(boxes_[b])) found.push_back(a);
          }
        });
      }
      std::sort(found.begin(), found.end());
      found.erase(std::unique(found.begin(), found.end()), found.end());
      for (std::uint32_t a : found)
        out.emplace_back(std::min<std::uint32_t>(a, b), std::max<std::uint32_t>(a, b));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Calls f(i) for each box i containing `p`.
  template <class F>
  void for_each_containing(const Vec<D>& p, F&& f) const {
    for (int level = 0; level < level_count(); ++level) {
      const auto it = levels_[level].find(key_of(p, level));
      if (it == levels_[level].end()) continue;
      for (std::uint32_t a : it->second)
        if (boxes_[a].contains(p)) f(a);
    }
  }

  /// Whether pred(i) holds for some box i containing `p`; stops early.
  template <class Pred>
  bool any_containing(const Vec<D>& p, Pred&& pred) const {
    for (int level = 0; level < level_count(); ++level) {
      const auto it = levels_[level].find(key_of(p, level));
      if (it == levels_[level].end()) continue;
      for (std::uint32_t a : it->second)
        if (boxes_[a].contains(p) && pred(a)) return true;
    }
    return false;
  }

  /// Indices of boxes overlapping `q` (unsorted, no duplicates).
  std::vector<std::uint32_t> overlapping(const Aabb<D>& q) const {
    std::vector<std::uint32_t> out;
    for (int level = 0; level < level_count(); ++level) {
      // Large queries against fine levels: scan the level's cells instead.
      const double cells = std::pow(q.max_extent() / cell_size(level) + 2.0, D);
      if (cells > static_cast<double>(levels_[level].size())) {
        for (const auto& [k, ids] : levels_[level])
          for (std::uint32_t a : ids)
            if (boxes_[a].overlaps(q)) out.push_back(a);
      } else {
        for_each_cell(q, level, [&](const Key& k) {
          const auto it = levels_[level].find(k);
          if (it == levels_[level].end()) return;
          for (std::uint32_t a : it->second)
            if (boxes_[a].overlaps(q)) out.push_back(a);
        });
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  using Key = std::array<std::int64_t, D>;

  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (auto v : k) {
        h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };

  double cell_size(int level) const { return std::ldexp(base_, level); }

  Key key_of(const Vec<D>& p, int level) const {
    Key k;
    const double s = cell_size(level);
    for (int i = 0; i < D; ++i) k[i] = static_cast<std::int64_t>(std::floor(p(i) / s));
    return k;
  }

  template <class F>
  void for_each_cell(const Aabb<D>& b, int level, F&& f) const {
    const Key lo = key_of(b.lo, level);
    const Key hi = key_of(b.hi, level);
    Key cur = lo;
    while (true) {
      f(cur);
      int i = 0;
      for (; i < D; ++i) {
        if (cur[i] < hi[i]) {
          ++cur[i];
          break;
        }
        cur[i] = lo[i];
      }
      if (i == D) return;
    }
  }

  double base_ = 1.0;
  std::vector<Aabb<D>> boxes_;
  std::vector<int> level_of_;
  std::vector<std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash>> levels_;
};

}  // namespace boolperc
