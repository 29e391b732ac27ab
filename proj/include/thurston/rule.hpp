#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "thurston/cell_complex.hpp"

namespace thurston {

/// The level-1 cell complex of the sphere with labels encoding f on each
/// 1-tile. Everything else is generated from this.
struct SubdivisionRule {
  std::string name;
  int m = 0;
  std::uint64_t degree = 0;

  /// Level-1 complex. Tiles are stored in label order (see CellComplex);
  /// `tile_region` is the 0-tile a tile sits in and `tile_color` the 0-tile
  /// it maps onto.
  CellComplex one_skeleton;

  /// Positive boundary cycle of each tile as authored, with the rotation
  /// index of the edge leaving the corner that maps to p_0. Kept so that
  /// documents round-trip exactly.
  struct BoundaryStep {
    EdgeId edge;
    bool forward = true;
    friend bool operator==(const BoundaryStep&, const BoundaryStep&) = default;
  };
  Csr<BoundaryStep> positive_boundary;
  std::vector<std::uint32_t> rotation;

  /// f(p_k) as a 0-vertex index.
  std::vector<std::uint32_t> post_vertex_map;

  [[nodiscard]] const std::vector<VertexId>& zero_vertices() const { return one_skeleton.zero_vertices; }
};

/// Local degrees at the 1-vertices and the no-periodic-critical-points gate.
struct CriticalityReport {
  std::vector<std::uint32_t> local_degree;
  std::vector<VertexId> critical;
  /// Zero-vertex indices that are critical and periodic under f.
  std::vector<std::uint32_t> periodic_critical;
  bool has_periodic_critical = false;
  /// Uniform bound on deg_{f^n}; absent when a periodic critical point exists.
  std::optional<std::uint64_t> degree_bound;
};

namespace detail {

inline std::vector<std::uint32_t> edge_valence(const CellComplex& c) {
  std::vector<std::uint32_t> val(c.vertex_count(), 0);
  for (const EdgeRecord& e : c.edges) {
    if (e.ends[0].index() < val.size()) ++val[e.ends[0].index()];
    if (e.ends[1].index() < val.size()) ++val[e.ends[1].index()];
  }
  return val;
}

}  // namespace detail

/// Local degree at every 1-vertex: every 0-vertex has exactly two incident
/// 0-edges, so deg_f(v) is half the number of 1-edges at v.
inline std::vector<std::uint32_t> local_degrees(const SubdivisionRule& rule) {
  auto val = detail::edge_valence(rule.one_skeleton);
  for (auto& x : val) x /= 2;
  return val;
}

inline CriticalityReport periodic_critical_check(const SubdivisionRule& rule) {
  CriticalityReport rep;
  const auto m = static_cast<std::uint32_t>(rule.m);
  rep.local_degree = local_degrees(rule);
  for (std::size_t v = 0; v < rep.local_degree.size(); ++v)
    if (rep.local_degree[v] >= 2) rep.critical.push_back(VertexId(static_cast<std::uint32_t>(v)));

  auto zero_degree = [&](std::uint32_t k) -> std::uint64_t {
    return rep.local_degree[rule.zero_vertices()[k].index()];
  };
  auto periodic = [&](std::uint32_t k) {
    std::uint32_t x = k;
    for (std::uint32_t i = 0; i < m; ++i) {
      x = rule.post_vertex_map[x];
      if (x == k) return true;
    }
    return false;
  };
  for (std::uint32_t k = 0; k < m; ++k)
    if (zero_degree(k) >= 2 && periodic(k)) rep.periodic_critical.push_back(k);
  rep.has_periodic_critical = !rep.periodic_critical.empty();
  if (rep.has_periodic_critical) return rep;

  // Product of local degrees along the orbit of each zero vertex, one full
  // cycle at most. Periodic zero vertices are non-critical here.
  std::vector<std::uint64_t> orbit_product(m, 1);
  for (std::uint32_t k = 0; k < m; ++k) {
    std::vector<bool> visited(m, false);
    std::uint64_t p = 1;
    for (std::uint32_t x = k; !visited[x]; x = rule.post_vertex_map[x]) {
      visited[x] = true;
      p *= zero_degree(x);
    }
    orbit_product[k] = p;
  }
  std::uint64_t bound = *std::max_element(orbit_product.begin(), orbit_product.end());
  const auto& img = rule.one_skeleton.vertex_image;
  for (std::size_t v = 0; v < rep.local_degree.size(); ++v)
    bound = std::max<std::uint64_t>(bound, rep.local_degree[v] * orbit_product[img[v]]);
  rep.degree_bound = bound;
  return rep;
}

/// Checks every rule invariant. An empty report means valid.
inline ValidationReport validate_rule(const SubdivisionRule& rule) {
  using detail::str;
  const CellComplex& c = rule.one_skeleton;
  ValidationReport r = validate_complex(c, rule.degree);
  const auto m = static_cast<std::uint32_t>(rule.m);
  const std::uint64_t d = rule.degree;

  std::uint64_t white_region = 0, white_color = 0;
  for (std::size_t t = 0; t < c.tile_count(); ++t) {
    white_region += c.tile_region[t] == Color::white;
    white_color += c.tile_color[t] == Color::white;
  }
  const std::uint64_t F = c.tile_count();
  if (white_region != d || F - white_region != d)
    r.add("region violation: " + str(white_region) + " white-region and " + str(F - white_region) +
          " black-region tiles, expected " + str(d) + " each");
  if (white_color != d || F - white_color != d)
    r.add("checkerboard violation: " + str(white_color) + " white and " + str(F - white_color) +
          " black tiles, expected " + str(d) + " each");

  for (std::size_t t = 0; t < rule.rotation.size(); ++t)
    if (rule.rotation[t] >= m) r.add("label violation: tile " + str(t) + " rotation out of range");

  if (rule.post_vertex_map.size() != m) {
    r.add("post map violation: expected " + str(m) + " entries");
    return r;
  }
  for (std::uint32_t k = 0; k < m; ++k) {
    if (rule.post_vertex_map[k] >= m) {
      r.add("post map violation: f(p_" + str(k) + ") is not a zero vertex");
      continue;
    }
    if (k < c.zero_vertices.size() && c.zero_vertices[k].index() < c.vertex_count() &&
        c.vertex_image[c.zero_vertices[k].index()] != rule.post_vertex_map[k])
      r.add("post map violation: image of zero vertex " + str(k) + " disagrees with post_vertex_map");
  }

  // Fiber degree sums.
  auto val = detail::edge_valence(c);
  std::vector<std::uint64_t> fiber(m, 0);
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    if (val[v] % 2 != 0) r.add("degree violation: vertex " + str(v) + " has odd valence " + str(val[v]));
    if (v < c.vertex_image.size() && c.vertex_image[v] < m) fiber[c.vertex_image[v]] += val[v] / 2;
  }
  for (std::uint32_t q = 0; q < m; ++q)
    if (fiber[q] != d)
      r.add("degree violation: local degrees over the fiber of p_" + str(q) + " sum to " + str(fiber[q]) +
            ", expected " + str(d));

  // Interior vertices only touch tiles of their region.
  if (c.vertex_tiles.rows() == c.vertex_count()) {
    for (std::size_t v = 0; v < c.vertex_count(); ++v) {
      const Location& l = c.vertex_location[v];
      if (l.is_on_curve()) continue;
      for (TileId t : c.tiles_at(VertexId(static_cast<std::uint32_t>(v))))
        if (c.tile_region[t.index()] != l.region) {
          r.add("region violation: interior vertex " + str(v) + " touches a tile of the other region");
          break;
        }
    }
  }

  // The white 0-tile is bounded positively by p_0 -> p_1 -> ..., so a
  // white-region tile walks each curve edge towards increasing position.
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const EdgeRecord& er = c.edges[e];
    if (!er.location.is_on_curve() || !er.tiles[0].valid() || !er.tiles[1].valid()) continue;
    if (er.tiles[0].index() >= F || er.tiles[1].index() >= F) continue;
    TileId wt = c.tile_region[er.tiles[0].index()] == Color::white ? er.tiles[0] : er.tiles[1];
    if (c.tile_region[wt.index()] != Color::white) continue;
    auto es = c.boundary(wt);
    if (es.size() != m) continue;
    for (std::size_t i = 0; i < m; ++i) {
      if (es[i].index() != e) continue;
      bool label_fwd = c.corners(wt)[i] == er.ends[0];
      bool positive_fwd = c.tile_color[wt.index()] == Color::white ? label_fwd : !label_fwd;
      VertexId start = positive_fwd ? er.ends[0] : er.ends[1];
      const Location& sl = c.vertex_location[start.index()];
      bool ok = sl.is_on_curve() && sl.zero_edge == er.location.zero_edge && sl.num == er.location.num;
      if (!ok) r.add("orientation violation: curve edge " + str(e) + " runs backwards around the white 0-tile");
    }
  }
  return r;
}

}  // namespace thurston
