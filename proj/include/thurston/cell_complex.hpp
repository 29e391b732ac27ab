#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "thurston/types.hpp"

namespace thurston {

/// One edge with both incident tiles (two-sided representation).
struct EdgeRecord {
  std::array<VertexId, 2> ends{};
  std::array<TileId, 2> tiles{};
  /// f^level maps this edge onto 0-edge `image_edge`.
  std::uint32_t image_edge = 0;
  /// True iff f^level(ends[0]) is the start vertex p_{image_edge}.
  bool image_forward = true;
  Location location;
};

/// An edge of the curve subcomplex, traversed from p_k towards p_{k+1}.
struct CurveStep {
  EdgeId edge;
  /// True iff the curve passes ends[0] before ends[1].
  bool forward = true;

  friend bool operator==(const CurveStep&, const CurveStep&) = default;
};

/// A single cell decomposition D^n of the sphere.
///
/// Tiles are stored in *label order*: corner i is the vertex that f^n sends to
/// the 0-vertex p_i, and boundary edge i joins corners i and i+1 and is sent
/// onto the 0-edge e_i. A white tile's label order is its positive boundary
/// orientation; a black tile's label order runs against it.
///
/// Vertex ids are stable across levels: a vertex created at level k keeps its
/// id in every deeper complex, and new vertices are appended.
struct CellComplex {
  int level = 0;
  int m = 0;

  std::vector<Location> vertex_location;
  /// f^level(v) as a 0-vertex index.
  std::vector<std::uint32_t> vertex_image;
  std::vector<int> vertex_created;

  std::vector<EdgeRecord> edges;

  Csr<EdgeId> tile_edges;
  Csr<VertexId> tile_corners;
  std::vector<Color> tile_color;
  /// Color of the 0-tile containing the tile.
  std::vector<Color> tile_region;
  std::vector<TileId> tile_parent;

  /// The m distinguished vertices p_0..p_{m-1} (postcritical points).
  std::vector<VertexId> zero_vertices;
  /// Per 0-edge, its subdivision into edges of this level, from p_k to p_{k+1}.
  std::vector<std::vector<CurveStep>> curve_chain;

  /// Vertex -> incident tiles. Filled by finalize().
  Csr<TileId> vertex_tiles;

  [[nodiscard]] std::size_t vertex_count() const { return vertex_location.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges.size(); }
  [[nodiscard]] std::size_t tile_count() const { return tile_color.size(); }

  [[nodiscard]] std::span<const VertexId> corners(TileId t) const { return tile_corners.row(t.index()); }
  [[nodiscard]] std::span<const EdgeId> boundary(TileId t) const { return tile_edges.row(t.index()); }
  [[nodiscard]] std::span<const TileId> tiles_at(VertexId v) const { return vertex_tiles.row(v.index()); }
  [[nodiscard]] const EdgeRecord& edge(EdgeId e) const { return edges[e.index()]; }

  /// Whether the tile traverses boundary edge `label` from ends[0] to ends[1]
  /// when walking in label order.
  [[nodiscard]] bool label_forward(TileId t, std::size_t label) const {
    return edges[boundary(t)[label].index()].ends[0] == corners(t)[label];
  }

  /// Rebuilds the vertex -> tile incidence from the tile corners.
  void finalize() {
    std::vector<std::uint32_t> count(vertex_count(), 0);
    for (std::size_t t = 0; t < tile_count(); ++t)
      for (VertexId v : corners(TileId(static_cast<std::uint32_t>(t)))) ++count[v.index()];
    std::vector<std::vector<TileId>> rows(vertex_count());
    for (std::size_t v = 0; v < rows.size(); ++v) rows[v].reserve(count[v]);
    for (std::size_t t = 0; t < tile_count(); ++t) {
      TileId tid(static_cast<std::uint32_t>(t));
      for (VertexId v : corners(tid)) {
        auto& r = rows[v.index()];
        if (r.empty() || r.back() != tid) r.push_back(tid);
      }
    }
    vertex_tiles.clear();
    vertex_tiles.reserve(rows.size(), std::accumulate(count.begin(), count.end(), std::size_t{0}));
    for (auto& r : rows) {
      std::sort(r.begin(), r.end());
      r.erase(std::unique(r.begin(), r.end()), r.end());
      vertex_tiles.push_row(std::span<const TileId>(r));
    }
  }
};

// ---------------------------------------------------------------------------
// Curve membership

/// True iff the vertex lies on 0-edge `k` (endpoints included).
inline bool on_zero_edge(const CellComplex& c, VertexId v, std::uint32_t k) {
  if (k >= static_cast<std::uint32_t>(c.m)) throw LookupError("0-edge index out of range");
  if (v.index() >= c.vertex_count()) throw LookupError("unknown vertex");
  const Location& l = c.vertex_location[v.index()];
  if (!l.is_on_curve()) return false;
  if (l.zero_edge == k) return true;
  return l.num == 0 && l.zero_edge == (k + 1) % static_cast<std::uint32_t>(c.m);
}

inline bool on_zero_edge(const CellComplex& c, EdgeId e, std::uint32_t k) {
  if (k >= static_cast<std::uint32_t>(c.m)) throw LookupError("0-edge index out of range");
  if (e.index() >= c.edge_count()) throw LookupError("unknown edge");
  const Location& l = c.edges[e.index()].location;
  return l.is_on_curve() && l.zero_edge == k;
}

/// A tile meets 0-edge k iff one of its corners lies on it: the intersection
/// of two subcomplexes of a common refinement always contains a vertex.
inline bool on_zero_edge(const CellComplex& c, TileId t, std::uint32_t k) {
  if (k >= static_cast<std::uint32_t>(c.m)) throw LookupError("0-edge index out of range");
  if (t.index() >= c.tile_count()) throw LookupError("unknown tile");
  for (VertexId v : c.corners(t))
    if (on_zero_edge(c, v, k)) return true;
  return false;
}

/// Bit k set iff the tile meets 0-edge k.
inline std::uint64_t zero_edge_mask(const CellComplex& c, TileId t) {
  std::uint64_t mask = 0;
  for (VertexId v : c.corners(t)) {
    const Location& l = c.vertex_location[v.index()];
    if (!l.is_on_curve()) continue;
    mask |= std::uint64_t{1} << l.zero_edge;
    if (l.num == 0) mask |= std::uint64_t{1} << ((l.zero_edge + c.m - 1) % c.m);
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] bool mentions(std::string_view needle) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
  }
  void add(std::string s) { violations.push_back(std::move(s)); }
  void merge(const ValidationReport& o) {
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  }
};

/// d^n, or nullopt on overflow.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t d, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / d) return std::nullopt;
    r *= d;
  }
  return r;
}

namespace detail {

inline std::string cat(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) out += p;
  return out;
}

inline std::string str(std::uint64_t v) { return std::to_string(v); }

/// Checks the curve subcomplex: every 0-edge is a chain of on-curve edges from
/// p_k to p_{k+1} with consecutive exact positions.
inline void validate_curve(const CellComplex& c, ValidationReport& r) {
  const auto m = static_cast<std::uint32_t>(c.m);
  if (c.zero_vertices.size() != m) {
    r.add("curve violation: expected " + str(m) + " zero vertices, found " + str(c.zero_vertices.size()));
    return;
  }
  for (VertexId z : c.zero_vertices)
    if (z.index() >= c.vertex_count()) {
      r.add("curve violation: zero vertex " + str(z.value) + " does not exist");
      return;
    }
  std::vector<std::vector<std::pair<std::uint64_t, EdgeId>>> per_edge(m);
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const Location& l = c.edges[e].location;
    if (!l.is_on_curve()) continue;
    if (l.zero_edge >= m) {
      r.add("curve violation: edge " + str(e) + " on nonexistent 0-edge");
      continue;
    }
    per_edge[l.zero_edge].push_back({l.num, EdgeId(static_cast<std::uint32_t>(e))});
  }
  for (std::uint32_t k = 0; k < m; ++k) {
    auto& segs = per_edge[k];
    std::sort(segs.begin(), segs.end(), [](auto& a, auto& b) { return a.first < b.first; });
    const std::uint64_t s = segs.size();
    if (s == 0) {
      r.add("curve violation: 0-edge " + str(k) + " has no subdividing edges");
      continue;
    }
    VertexId at = c.zero_vertices[k];
    for (std::uint64_t i = 0; i < s; ++i) {
      const EdgeRecord& er = c.edges[segs[i].second.index()];
      if (segs[i].first != i || er.location.den != s) {
        r.add("curve-refinement violation: 0-edge " + str(k) + " segment positions are not 0.." + str(s - 1) +
              " over " + str(s));
        break;
      }
      const Location& vl = c.vertex_location[at.index()];
      bool pos_ok = vl.is_on_curve() && vl.zero_edge == k && vl.num == i && vl.den == s;
      if (!pos_ok) {
        r.add("curve-refinement violation: vertex " + str(at.value) + " is not at position " + str(i) + "/" + str(s) +
              " of 0-edge " + str(k));
        break;
      }
      if (er.ends[0] == at)
        at = er.ends[1];
      else if (er.ends[1] == at)
        at = er.ends[0];
      else {
        r.add("curve violation: 0-edge " + str(k) + " chain is broken at segment " + str(i));
        break;
      }
    }
    if (at != c.zero_vertices[(k + 1) % m])
      r.add("curve violation: 0-edge " + str(k) + " chain does not end at p_" + str((k + 1) % m));
  }
  // Vertices claiming a curve position must sit on a chain; checked via counts.
  std::vector<std::uint64_t> claimed(m, 0);
  for (const Location& l : c.vertex_location)
    if (l.is_on_curve() && l.zero_edge < m) ++claimed[l.zero_edge];
  for (std::uint32_t k = 0; k < m; ++k)
    if (claimed[k] != per_edge[k].size())
      r.add("curve violation: 0-edge " + str(k) + " has " + str(claimed[k]) + " on-curve vertices for " +
            str(per_edge[k].size()) + " segments");
}

}  // namespace detail

/// Checks every structural invariant of one level. An empty report means valid.
inline ValidationReport validate_complex(const CellComplex& c, std::uint64_t degree) {
  using detail::str;
  ValidationReport r;
  const std::size_t V = c.vertex_count(), E = c.edge_count(), F = c.tile_count();
  const auto m = static_cast<std::size_t>(c.m);

  if (c.m < 3) r.add("parameter violation: m = " + str(c.m) + " < 3");
  if (c.level >= 0) {
    auto dn = checked_pow(degree, c.level);
    if (!dn) {
      r.add("count violation: degree^level overflows");
    } else {
      if (E != m * *dn) r.add("count violation: E = " + str(E) + ", expected " + str(m * *dn));
      if (F != 2 * *dn) r.add("count violation: F = " + str(F) + ", expected " + str(2 * *dn));
      if (V > m * *dn) r.add("count violation: V = " + str(V) + " exceeds " + str(m * *dn));
    }
  }
  const long long euler = static_cast<long long>(V) - static_cast<long long>(E) + static_cast<long long>(F);
  if (euler != 2) r.add("Euler violation: V - E + F = " + std::to_string(euler));

  if (c.tile_edges.rows() != F || c.tile_corners.rows() != F || c.tile_region.size() != F) {
    r.add("structure violation: tile arrays have inconsistent sizes");
    return r;
  }
  if (c.vertex_image.size() != V) r.add("structure violation: vertex_image has wrong size");

  std::vector<std::uint32_t> seen(E, 0);
  for (std::size_t t = 0; t < F; ++t) {
    TileId tid(static_cast<std::uint32_t>(t));
    auto es = c.boundary(tid);
    auto vs = c.corners(tid);
    if (es.size() != m || vs.size() != m) {
      r.add("m-gon violation: tile " + str(t) + " has " + str(es.size()) + " boundary edges and " + str(vs.size()) +
            " corners, expected " + str(m));
      continue;
    }
    std::vector<VertexId> sorted(vs.begin(), vs.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      r.add("m-gon violation: tile " + str(t) + " repeats a corner");
    for (std::size_t i = 0; i < m; ++i) {
      EdgeId e = es[i];
      if (e.index() >= E) {
        r.add("structure violation: tile " + str(t) + " references missing edge " + str(e.value));
        continue;
      }
      ++seen[e.index()];
      const EdgeRecord& er = c.edges[e.index()];
      VertexId a = vs[i], b = vs[(i + 1) % m];
      bool joins = (er.ends[0] == a && er.ends[1] == b) || (er.ends[0] == b && er.ends[1] == a);
      if (!joins)
        r.add("m-gon violation: tile " + str(t) + " boundary edge " + str(i) + " does not join corners " + str(i) +
              " and " + str((i + 1) % m));
      if (er.image_edge != i)
        r.add("label violation: tile " + str(t) + " boundary edge " + str(i) + " maps to 0-edge " +
              str(er.image_edge));
      if (er.tiles[0] != tid && er.tiles[1] != tid)
        r.add("incidence violation: edge " + str(e.value) + " does not list tile " + str(t));
      if (c.vertex_image.size() == V && a.index() < V && c.vertex_image[a.index()] != i)
        r.add("label violation: tile " + str(t) + " corner " + str(i) + " maps to p_" +
              str(c.vertex_image[a.index()]));
    }
  }

  for (std::size_t e = 0; e < E; ++e) {
    const EdgeRecord& er = c.edges[e];
    if (!er.tiles[0].valid() || !er.tiles[1].valid() || er.tiles[0] == er.tiles[1] || er.tiles[0].index() >= F ||
        er.tiles[1].index() >= F) {
      r.add("incidence violation: edge " + str(e) + " does not have two distinct incident tiles");
      continue;
    }
    if (seen[e] != 2) r.add("incidence violation: edge " + str(e) + " is on " + str(seen[e]) + " tile boundaries");
    if (er.ends[0] == er.ends[1]) r.add("structure violation: edge " + str(e) + " is a loop");
    if (c.vertex_image.size() == V && er.ends[0].index() < V && er.ends[1].index() < V) {
      auto i0 = c.vertex_image[er.ends[0].index()], i1 = c.vertex_image[er.ends[1].index()];
      auto k = er.image_edge, k1 = static_cast<std::uint32_t>((er.image_edge + 1) % m);
      bool ok = er.image_forward ? (i0 == k && i1 == k1) : (i0 == k1 && i1 == k);
      if (!ok) r.add("label violation: edge " + str(e) + " image is inconsistent with its endpoints");
    }
    Color c0 = c.tile_color[er.tiles[0].index()], c1 = c.tile_color[er.tiles[1].index()];
    if (c0 == c1) {
      r.add("checkerboard violation: tiles " + str(er.tiles[0].value) + " and " + str(er.tiles[1].value) +
            " share edge " + str(e) + " and have the same color");
    } else if (seen[e] == 2) {
      // Positive traversal: white in label order, black against it.
      auto positive_forward = [&](TileId t) {
        auto es = c.boundary(t);
        for (std::size_t i = 0; i < es.size(); ++i)
          if (es[i].index() == e) {
            bool fwd = es.size() == m && c.corners(t)[i] == er.ends[0];
            return c.tile_color[t.index()] == Color::white ? fwd : !fwd;
          }
        return true;
      };
      if (positive_forward(er.tiles[0]) == positive_forward(er.tiles[1]))
        r.add("orientation violation: edge " + str(e) + " is traversed the same way by both tiles");
    }
    Color r0 = c.tile_region[er.tiles[0].index()], r1 = c.tile_region[er.tiles[1].index()];
    if (er.location.is_on_curve()) {
      if (r0 == r1) r.add("region violation: curve edge " + str(e) + " has both tiles in one 0-tile");
    } else if (r0 != er.location.region || r1 != er.location.region) {
      r.add("region violation: interior edge " + str(e) + " touches a tile of the other region");
    }
  }

  if (c.level >= 0) detail::validate_curve(c, r);
  return r;
}

}  // namespace thurston
