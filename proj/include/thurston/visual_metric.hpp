#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thurston/tile_graph.hpp"

namespace thurston {

/// A tower vertex, named by the level that created it and its (stable) id.
struct PointRef {
  int level = 0;
  VertexId vertex{0};
  friend auto operator<=>(const PointRef&, const PointRef&) = default;
};

/// A level that may be +∞ or beyond what the built depth can decide.
struct PointLevel {
  enum class Kind : std::uint8_t { finite, infinite, inconclusive } kind = Kind::finite;
  int value = 0;

  static PointLevel at(int v) { return {Kind::finite, v}; }
  static PointLevel infinity() { return {Kind::infinite, 0}; }
  static PointLevel unknown() { return {Kind::inconclusive, 0}; }
  [[nodiscard]] bool finite() const { return kind == Kind::finite; }
  [[nodiscard]] std::string str() const {
    if (kind == Kind::infinite) return "inf";
    if (kind == Kind::inconclusive) return "inconclusive";
    return std::to_string(value);
  }
  friend bool operator==(const PointLevel&, const PointLevel&) = default;
};

/// Same-level tile intersection tables for point queries.
class PointMetric {
 public:
  explicit PointMetric(const Tower& tower) : tower_(&tower) {
    for (int n = 0; n <= tower.depth(); ++n) {
      const CellComplex& c = tower.level(n);
      Csr<TileId> rows;
      std::vector<TileId> row;
      for (std::size_t t = 0; t < c.tile_count(); ++t) {
        row.clear();
        for (VertexId w : c.corners(TileId(static_cast<std::uint32_t>(t)))) {
          auto at = c.tiles_at(w);
          row.insert(row.end(), at.begin(), at.end());
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        rows.push_row(std::span<const TileId>(row));
      }
      meets_.push_back(std::move(rows));
    }
  }

  [[nodiscard]] const Tower& tower() const { return *tower_; }

  [[nodiscard]] PointRef point(VertexId v) const {
    const CellComplex& top = tower_->level(tower_->depth());
    if (v.index() >= top.vertex_count()) throw LookupError("unknown point " + std::to_string(v.value));
    return {top.vertex_created[v.index()], v};
  }

  void check(const PointRef& p) const {
    const CellComplex& top = tower_->level(tower_->depth());
    if (p.vertex.index() >= top.vertex_count() || top.vertex_created[p.vertex.index()] != p.level)
      throw LookupError("unknown point (" + std::to_string(p.level) + ", " + std::to_string(p.vertex.value) + ")");
  }

  [[nodiscard]] bool tiles_meet(int n, TileId a, TileId b) const {
    auto row = meets_[static_cast<std::size_t>(n)].row(a.index());
    return std::binary_search(row.begin(), row.end(), b);
  }

  /// Some n-tile containing x is disjoint from some n-tile containing y.
  [[nodiscard]] bool disjoint_pair(VertexId x, VertexId y, int n) const {
    for (TileId a : tower_->tiles_containing(x, n))
      for (TileId b : tower_->tiles_containing(y, n))
        if (!tiles_meet(n, a, b)) return true;
    return false;
  }
  [[nodiscard]] bool meeting_pair(VertexId x, VertexId y, int n) const {
    for (TileId a : tower_->tiles_containing(x, n))
      for (TileId b : tower_->tiles_containing(y, n))
        if (tiles_meet(n, a, b)) return true;
    return false;
  }

  [[nodiscard]] PointLevel m(const PointRef& x, const PointRef& y) const {
    check(x);
    check(y);
    if (x == y) return PointLevel::infinity();
    for (int n = 0; n <= tower_->depth(); ++n)
      if (disjoint_pair(x.vertex, y.vertex, n)) return PointLevel::at(n);
    return PointLevel::unknown();
  }

  /// Meeting pairs at level n force meeting parents, so scanning up is enough.
  [[nodiscard]] PointLevel m_prime(const PointRef& x, const PointRef& y) const {
    check(x);
    check(y);
    if (x == y) throw LookupError("m' is undefined for x = y");
    int n = -1;
    while (n < tower_->depth() && meeting_pair(x.vertex, y.vertex, n + 1)) ++n;
    if (n == tower_->depth()) return PointLevel::unknown();
    return PointLevel::at(n);
  }

  /// k-tiles meeting the closed n-tile t.
  [[nodiscard]] std::vector<TileId> touching(int n, TileId t, int k) const {
    std::vector<TileId> out;
    if (k <= n) {
      for (VertexId w : tower_->level(n).corners(t)) {
        auto c = tower_->tiles_containing(w, k);
        out.insert(out.end(), c.begin(), c.end());
      }
    } else {
      std::uint32_t lo = t.value, hi = t.value + 1;
      for (int j = n; j < k; ++j) {
        lo = tower_->children(j, TileId(lo)).first;
        hi = tower_->children(j, TileId(hi - 1)).second;
      }
      const CellComplex& ck = tower_->level(k);
      for (std::uint32_t s = lo; s < hi; ++s)
        for (VertexId w : ck.corners(TileId(s))) {
          auto at = ck.tiles_at(w);
          out.insert(out.end(), at.begin(), at.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// min m(x,y) over distinct deepest-level vertices x, y of the n-tile t.
  /// Two points of t in disjoint k-tiles exist exactly when two k-tiles
  /// meeting t are disjoint, so no pair scan is needed.
  [[nodiscard]] PointLevel min_m_within(int n, TileId t) const {
    for (int k = 0; k <= tower_->depth(); ++k) {
      auto ts = touching(n, t, k);
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j)
          if (!tiles_meet(k, ts[i], ts[j])) return PointLevel::at(k);
    }
    return PointLevel::unknown();
  }

 private:
  const Tower* tower_;
  std::vector<Csr<TileId>> meets_;
};

inline PointLevel m_points(const PointRef& x, const PointRef& y, const Tower& tower) {
  return PointMetric(tower).m(x, y);
}

inline PointLevel m_prime_points(const PointRef& x, const PointRef& y, const Tower& tower) {
  return PointMetric(tower).m_prime(x, y);
}

struct ProfileRow {
  int level = 0;
  double min = 0.0;  // over n-tiles of Λ^n · diam_ρ
  double max = 0.0;
  std::uint64_t tiles = 0;
  std::uint64_t inconclusive = 0;
};

struct CharvisualProfile {
  double lambda = 0.0;
  std::vector<ProfileRow> rows;
  /// Largest max over smallest min across the conclusive rows.
  double band = 0.0;
  [[nodiscard]] bool within(double factor) const { return band <= factor; }
};

inline CharvisualProfile charvisual_profile(const Tower& tower, double lambda, int first_level = 0,
                                            int last_level = -1) {
  if (!(lambda > 1)) throw LookupError("lambda must exceed 1");
  if (tower.depth() < 2) throw LookupError("the profile needs depth >= 2");
  if (last_level < 0) last_level = tower.depth();
  PointMetric pm(tower);
  CharvisualProfile r;
  r.lambda = lambda;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int n = first_level; n <= last_level; ++n) {
    ProfileRow row;
    row.level = n;
    row.min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < tower.tile_count(n); ++t) {
      const PointLevel k = pm.min_m_within(n, TileId(static_cast<std::uint32_t>(t)));
      ++row.tiles;
      if (!k.finite()) {
        ++row.inconclusive;
        continue;
      }
      const double v = std::pow(lambda, n - k.value);
      row.min = std::min(row.min, v);
      row.max = std::max(row.max, v);
    }
    if (row.inconclusive == 0) {
      lo = std::min(lo, row.min);
      hi = std::max(hi, row.max);
    }
    r.rows.push_back(row);
  }
  r.band = hi > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  return r;
}

/// X_0 ⊇ X_1 ⊇ … ⊇ X_depth, each the lowest-id child containing the point.
inline std::vector<TileId> canonical_ray(const Tower& tower, VertexId v) {
  std::vector<TileId> ray;
  auto top = tower.tiles_containing(v, 0);
  ray.push_back(top.front());
  for (int i = 0; i < tower.depth(); ++i) {
    const auto [lo, hi] = tower.children(i, ray.back());
    TileId next{kInvalidIndex};
    for (TileId t : tower.tiles_containing(v, i + 1))
      if (t.value >= lo && t.value < hi) {
        next = t;
        break;
      }
    THURSTON_CHECK(next.value != kInvalidIndex, "point lost along its ray");
    ray.push_back(next);
  }
  return ray;
}

struct RayProducts {
  std::vector<GromovValue> products;  // (X_i, Y_i), i = 0..depth
  PointLevel m;
  /// Last product minus m, when m is finite.
  std::optional<double> gap;
};

inline RayProducts ray_products(const PointRef& x, const PointRef& y, const Tower& tower) {
  PointMetric pm(tower);
  RayProducts r;
  r.m = pm.m(x, y);
  const auto rx = canonical_ray(tower, x.vertex);
  const auto ry = canonical_ray(tower, y.vertex);
  TileGraph g(tower);
  for (int i = 0; i <= tower.depth(); ++i)
    r.products.push_back(g.gromov_product({i, rx[static_cast<std::size_t>(i)]}, {i, ry[static_cast<std::size_t>(i)]}));
  if (r.m.finite()) r.gap = r.products.back().value() - r.m.value;
  return r;
}

}  // namespace thurston
