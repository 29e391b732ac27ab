#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thurston/rule.hpp"

namespace thurston {

struct TowerLimits {
  int max_depth = 8;
  std::uint64_t max_bytes = std::uint64_t{4} << 30;
};

struct LevelStats {
  int level = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t tiles = 0;
  double build_seconds = 0.0;
};

namespace detail {

/// How a rule 1-vertex is placed inside an n-tile.
struct Placement {
  enum class Kind : std::uint8_t { corner, curve_point, interior } kind = Kind::interior;
  std::uint32_t zero_edge = 0;  // corner index for `corner`
  std::uint64_t position = 0;   // segment boundary index along the 0-edge
  std::uint32_t local = 0;      // index among the region's interior vertices
};

/// The part of the rule inside one 0-tile, ready to be pulled back.
struct Pattern {
  std::vector<TileId> tiles;
  std::vector<VertexId> interior_vertices;
};

struct RulePatterns {
  std::vector<Placement> vertex;           // per rule vertex
  std::vector<std::uint32_t> edge_local;   // per rule interior edge, its index in its region
  std::vector<std::uint64_t> segments;     // per 0-edge, number of 1-edges on it
  /// (0-edge, position) -> rule vertex, positions 0..s_k.
  std::vector<std::vector<VertexId>> curve_vertex;
  std::array<Pattern, 2> region;
  std::array<std::vector<EdgeId>, 2> interior_edges;

  explicit RulePatterns(const SubdivisionRule& rule) {
    const CellComplex& c = rule.one_skeleton;
    const auto m = static_cast<std::uint32_t>(rule.m);
    segments.assign(m, 0);
    for (const EdgeRecord& e : c.edges)
      if (e.location.is_on_curve()) ++segments[e.location.zero_edge];
    curve_vertex.resize(m);
    for (std::uint32_t k = 0; k < m; ++k) curve_vertex[k].assign(segments[k] + 1, VertexId());

    vertex.resize(c.vertex_count());
    for (std::size_t v = 0; v < c.vertex_count(); ++v) {
      const Location& l = c.vertex_location[v];
      VertexId vid(static_cast<std::uint32_t>(v));
      Placement& p = vertex[v];
      if (l.is_on_curve()) {
        p.zero_edge = l.zero_edge;
        p.position = l.num;
        p.kind = l.num == 0 ? Placement::Kind::corner : Placement::Kind::curve_point;
        curve_vertex[l.zero_edge][l.num] = vid;
        if (l.num == 0) curve_vertex[(l.zero_edge + m - 1) % m][segments[(l.zero_edge + m - 1) % m]] = vid;
      } else {
        auto& pat = region[static_cast<int>(l.region)];
        p.kind = Placement::Kind::interior;
        p.local = static_cast<std::uint32_t>(pat.interior_vertices.size());
        pat.interior_vertices.push_back(vid);
      }
    }
    edge_local.assign(c.edge_count(), kInvalidIndex);
    for (std::size_t e = 0; e < c.edge_count(); ++e) {
      const Location& l = c.edges[e].location;
      if (l.is_on_curve()) continue;
      auto& list = interior_edges[static_cast<int>(l.region)];
      edge_local[e] = static_cast<std::uint32_t>(list.size());
      list.push_back(EdgeId(static_cast<std::uint32_t>(e)));
    }
    for (std::size_t t = 0; t < c.tile_count(); ++t)
      region[static_cast<int>(c.tile_region[t])].tiles.push_back(TileId(static_cast<std::uint32_t>(t)));
  }
};

}  // namespace detail

/// The levels D^{-1}, D^0, ..., D^N of one rule, with the cross-level
/// vertex -> tile containment index. Immutable once built apart from
/// subdivide_once(), which only appends.
class Tower {
 public:
  /// Builds levels -1 and 0. Throws GateError for rules with periodic
  /// critical points and SchemaError for invalid rules.
  explicit Tower(SubdivisionRule rule, TowerLimits limits = {})
      : rule_(std::make_shared<const SubdivisionRule>(std::move(rule))), limits_(limits) {
    auto report = validate_rule(*rule_);
    if (!report.ok()) throw SchemaError("invalid rule '" + rule_->name + "': " + report.violations.front());
    auto crit = periodic_critical_check(*rule_);
    if (crit.has_periodic_critical)
      throw GateError("rule '" + rule_->name + "' has a periodic critical point at p_" +
                      std::to_string(crit.periodic_critical.front()));
    degree_bound_ = *crit.degree_bound;
    patterns_ = std::make_shared<const detail::RulePatterns>(*rule_);
    build_level_zero();
  }

  [[nodiscard]] const SubdivisionRule& rule() const { return *rule_; }
  [[nodiscard]] int depth() const { return static_cast<int>(levels_.size()) - 1; }
  [[nodiscard]] int m() const { return rule_->m; }
  [[nodiscard]] std::uint64_t degree() const { return rule_->degree; }
  [[nodiscard]] std::uint64_t degree_bound() const { return degree_bound_; }
  [[nodiscard]] const TowerLimits& limits() const { return limits_; }
  [[nodiscard]] const std::vector<LevelStats>& stats() const { return stats_; }

  [[nodiscard]] const CellComplex& level(int n) const {
    if (n < 0 || n > depth()) throw LookupError("level " + std::to_string(n) + " is not built");
    return levels_[static_cast<std::size_t>(n)];
  }

  /// Number of tiles at level n, counting the single (-1)-tile.
  [[nodiscard]] std::size_t tile_count(int n) const { return n == -1 ? 1 : level(n).tile_count(); }

  /// The d children of an n-tile are the contiguous (n+1)-tiles
  /// [X*d, X*d + d).
  [[nodiscard]] std::pair<std::uint32_t, std::uint32_t> children(int n, TileId x) const {
    if (n + 1 > depth()) throw LookupError("children beyond built depth");
    const auto d = static_cast<std::uint32_t>(degree());
    if (n == -1) return {0, 2};
    return {x.value * d, x.value * d + d};
  }

  /// Parent of an n-tile; the parent of a 0-tile is S², TileId(0) at level -1.
  [[nodiscard]] TileId parent(int n, TileId x) const {
    if (n <= 0) return TileId(0);
    return level(n).tile_parent[x.index()];
  }

  /// The k-tiles whose closure contains the point v (ids are stable, so a
  /// vertex names the same point at every level it exists).
  [[nodiscard]] std::span<const TileId> tiles_containing(VertexId v, int k) const {
    if (k > depth()) throw LookupError("level " + std::to_string(k) + " exceeds built depth");
    if (k < -1) throw LookupError("level below -1");
    if (v.index() >= levels_.back().vertex_count()) throw LookupError("unknown vertex");
    if (k == -1) return {&sphere_, 1};
    return containing_[static_cast<std::size_t>(k)].row(v.index());
  }

  /// Rough memory footprint of a tower built to `n`.
  [[nodiscard]] std::uint64_t estimated_bytes(int n) const {
    const std::uint64_t m = static_cast<std::uint64_t>(rule_->m), d = degree();
    std::uint64_t total = 0, dn = 1;
    for (int lv = 0; lv <= n; ++lv) {
      const std::uint64_t F = 2 * dn, E = m * dn, V = m * dn;
      total += F * (12 * m + 16) + E * 64 + V * (48 + 16 * static_cast<std::uint64_t>(n + 1));
      if (lv < n) {
        if (dn > (std::uint64_t{1} << 50) / d) return std::numeric_limits<std::uint64_t>::max();
        dn *= d;
      }
    }
    return total;
  }

  /// Appends level depth()+1.
  void subdivide_once() {
    const int next = depth() + 1;
    if (next > limits_.max_depth)
      throw CapExceeded("depth " + std::to_string(next) + " exceeds the cap " + std::to_string(limits_.max_depth));
    if (estimated_bytes(next) > limits_.max_bytes)
      throw CapExceeded("depth " + std::to_string(next) + " needs about " + std::to_string(estimated_bytes(next) >> 20) +
                        " MiB, above the cap of " + std::to_string(limits_.max_bytes >> 20) + " MiB");
    auto t0 = std::chrono::steady_clock::now();
    levels_.push_back(build_next(levels_.back()));
    extend_containment();
    auto report = validate_complex(levels_.back(), degree());
    THURSTON_CHECK(report.ok(), "level " + std::to_string(next) + ": " +
                                    (report.ok() ? std::string() : report.violations.front()));
    record_stats(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

 private:
  void record_stats(double seconds) {
    const CellComplex& c = levels_.back();
    stats_.push_back({c.level, c.vertex_count(), c.edge_count(), c.tile_count(), seconds});
  }

  void build_level_zero() {
    const auto m = static_cast<std::uint32_t>(rule_->m);
    CellComplex c;
    c.level = 0;
    c.m = rule_->m;
    for (std::uint32_t k = 0; k < m; ++k) {
      c.vertex_location.push_back(Location::on_curve(k, 0, 1));
      c.vertex_image.push_back(k);
      c.vertex_created.push_back(0);
      c.zero_vertices.push_back(VertexId(k));
      EdgeRecord e;
      e.ends = {VertexId(k), VertexId((k + 1) % m)};
      e.tiles = {TileId(0), TileId(1)};
      e.image_edge = k;
      e.image_forward = true;
      e.location = Location::on_curve(k, 0, 1);
      c.edges.push_back(e);
      c.curve_chain.push_back({CurveStep{EdgeId(k), true}});
    }
    std::vector<VertexId> corners;
    std::vector<EdgeId> edges;
    for (std::uint32_t k = 0; k < m; ++k) {
      corners.push_back(VertexId(k));
      edges.push_back(EdgeId(k));
    }
    for (Color col : {Color::white, Color::black}) {
      c.tile_corners.push_row(std::span<const VertexId>(corners));
      c.tile_edges.push_row(std::span<const EdgeId>(edges));
      c.tile_color.push_back(col);
      c.tile_region.push_back(col);
      c.tile_parent.push_back(TileId(0));
    }
    c.finalize();
    auto report = validate_complex(c, degree());
    THURSTON_CHECK(report.ok(), "level 0: " + (report.ok() ? std::string() : report.violations.front()));
    levels_.push_back(std::move(c));
    containing_.clear();
    containing_.push_back(levels_.back().vertex_tiles);
    record_stats(0.0);
  }

  CellComplex build_next(const CellComplex& prev) const {
    using detail::Placement;
    const detail::RulePatterns& pat = *patterns_;
    const CellComplex& r1 = rule_->one_skeleton;
    const auto m = static_cast<std::uint32_t>(rule_->m);
    const auto d = static_cast<std::uint32_t>(degree());

    CellComplex next;
    next.level = prev.level + 1;
    next.m = prev.m;
    next.zero_vertices = prev.zero_vertices;

    // Old vertices keep their ids; f^{n+1} = f o f^n.
    const std::size_t V0 = prev.vertex_count();
    next.vertex_location = prev.vertex_location;
    next.vertex_created = prev.vertex_created;
    next.vertex_image.resize(V0);
    for (std::size_t v = 0; v < V0; ++v) next.vertex_image[v] = rule_->post_vertex_map[prev.vertex_image[v]];

    auto new_vertex = [&](const Location& loc, std::uint32_t image) {
      next.vertex_location.push_back(loc);
      next.vertex_image.push_back(image);
      next.vertex_created.push_back(next.level);
      return VertexId(static_cast<std::uint32_t>(next.vertex_location.size() - 1));
    };
    auto new_edge = [&](VertexId a, VertexId b, const Location& loc) {
      EdgeRecord er;
      er.ends = {a, b};
      er.location = loc;
      const auto ia = next.vertex_image[a.index()], ib = next.vertex_image[b.index()];
      er.image_forward = (ia + 1) % m == ib;
      THURSTON_CHECK(er.image_forward || (ib + 1) % m == ia, "edge endpoints do not map to adjacent 0-vertices");
      er.image_edge = er.image_forward ? ia : ib;
      next.edges.push_back(er);
      return EdgeId(static_cast<std::uint32_t>(next.edges.size() - 1));
    };

    // Canonical gluing: the subdivision of an n-edge is keyed by the n-edge
    // and indexed along its own direction ends[0] -> ends[1].
    std::vector<std::uint32_t> point_base(prev.edge_count(), kInvalidIndex);
    std::vector<std::uint32_t> segment_base(prev.edge_count(), kInvalidIndex);

    auto curve_location_of = [&](const EdgeRecord& parent_edge) {
      return parent_edge.location.is_on_curve() ? Location::on_curve(parent_edge.location.zero_edge, 0, 1)
                                                : Location::interior(parent_edge.location.region);
    };
    auto ensure_edge_subdivided = [&](EdgeId e) {
      if (point_base[e.index()] != kInvalidIndex) return;
      const EdgeRecord& pe = prev.edges[e.index()];
      const auto k = pe.image_edge;
      const std::uint64_t s = pat.segments[k];
      const Location loc = curve_location_of(pe);
      point_base[e.index()] = static_cast<std::uint32_t>(next.vertex_location.size());
      for (std::uint64_t g = 1; g < s; ++g) {
        const std::uint64_t j = pe.image_forward ? g : s - g;
        new_vertex(loc, r1.vertex_image[pat.curve_vertex[k][j].index()]);
      }
      auto point = [&](std::uint64_t g) {
        if (g == 0) return pe.ends[0];
        if (g == s) return pe.ends[1];
        return VertexId(point_base[e.index()] + static_cast<std::uint32_t>(g - 1));
      };
      segment_base[e.index()] = static_cast<std::uint32_t>(next.edges.size());
      for (std::uint64_t g = 0; g < s; ++g) new_edge(point(g), point(g + 1), loc);
    };

    next.tile_corners.reserve(prev.tile_count() * d, prev.tile_count() * d * m);
    next.tile_edges.reserve(prev.tile_count() * d, prev.tile_count() * d * m);
    std::vector<VertexId> vmap(r1.vertex_count());
    std::vector<EdgeId> corners_buf(m);
    std::vector<VertexId> vcorners(m);
    std::vector<EdgeId> vedges(m);

    for (std::size_t x = 0; x < prev.tile_count(); ++x) {
      const TileId xt(static_cast<std::uint32_t>(x));
      const Color color = prev.tile_color[x];
      const Color region = prev.tile_region[x];
      const detail::Pattern& p = pat.region[static_cast<int>(color)];
      THURSTON_CHECK(p.tiles.size() == d, "pattern does not have d tiles");
      auto xc = prev.corners(xt);
      auto xe = prev.boundary(xt);
      for (std::uint32_t k = 0; k < m; ++k) {
        const EdgeRecord& pe = prev.edges[xe[k].index()];
        THURSTON_CHECK(pe.image_edge == k, "tile label does not match edge image");
        THURSTON_CHECK((pe.ends[0] == xc[k]) == pe.image_forward, "edge direction does not match tile labels");
        ensure_edge_subdivided(xe[k]);
      }

      // Place the pattern's vertices.
      const auto interior_base = static_cast<std::uint32_t>(next.vertex_location.size());
      for (VertexId rv : p.interior_vertices) new_vertex(Location::interior(region), r1.vertex_image[rv.index()]);
      auto place = [&](VertexId rv) -> VertexId {
        const Placement& pl = pat.vertex[rv.index()];
        switch (pl.kind) {
          case Placement::Kind::corner:
            return xc[pl.zero_edge];
          case Placement::Kind::curve_point: {
            const EdgeId e = xe[pl.zero_edge];
            const EdgeRecord& pe = prev.edges[e.index()];
            const std::uint64_t s = pat.segments[pl.zero_edge];
            const std::uint64_t g = pe.image_forward ? pl.position : s - pl.position;
            return VertexId(point_base[e.index()] + static_cast<std::uint32_t>(g - 1));
          }
          case Placement::Kind::interior:
            return VertexId(interior_base + pl.local);
        }
        return VertexId();
      };
      for (VertexId rv : p.interior_vertices) vmap[rv.index()] = place(rv);

      // Interior edges of the pattern are new; curve edges reuse segments.
      const auto edge_base = static_cast<std::uint32_t>(next.edges.size());
      for (EdgeId re : pat.interior_edges[static_cast<int>(color)]) {
        const EdgeRecord& r = r1.edges[re.index()];
        new_edge(place(r.ends[0]), place(r.ends[1]), Location::interior(region));
      }
      auto map_edge = [&](EdgeId re) -> EdgeId {
        const EdgeRecord& r = r1.edges[re.index()];
        if (!r.location.is_on_curve()) return EdgeId(edge_base + pat.edge_local[re.index()]);
        const auto k = r.location.zero_edge;
        const EdgeId e = xe[k];
        const EdgeRecord& pe = prev.edges[e.index()];
        const std::uint64_t s = pat.segments[k];
        const std::uint64_t g = pe.image_forward ? r.location.num : s - 1 - r.location.num;
        return EdgeId(segment_base[e.index()] + static_cast<std::uint32_t>(g));
      };

      for (TileId pt : p.tiles) {
        const auto tid = TileId(static_cast<std::uint32_t>(next.tile_color.size()));
        auto pc = r1.corners(pt);
        auto pb = r1.boundary(pt);
        for (std::uint32_t i = 0; i < m; ++i) {
          vcorners[i] = place(pc[i]);
          vedges[i] = map_edge(pb[i]);
          EdgeRecord& er = next.edges[vedges[i].index()];
          if (!er.tiles[0].valid())
            er.tiles[0] = tid;
          else {
            THURSTON_CHECK(!er.tiles[1].valid(), "edge glued to more than two tiles");
            er.tiles[1] = tid;
          }
        }
        next.tile_corners.push_row(std::span<const VertexId>(vcorners));
        next.tile_edges.push_row(std::span<const EdgeId>(vedges));
        next.tile_color.push_back(r1.tile_color[pt.index()]);
        next.tile_region.push_back(region);
        next.tile_parent.push_back(xt);
      }
    }

    // Curve chains and exact positions along each 0-edge.
    next.curve_chain.assign(m, {});
    for (std::uint32_t k = 0; k < m; ++k) {
      auto& chain = next.curve_chain[k];
      for (const CurveStep& step : prev.curve_chain[k]) {
        const EdgeRecord& pe = prev.edges[step.edge.index()];
        const std::uint64_t s = pat.segments[pe.image_edge];
        for (std::uint64_t i = 0; i < s; ++i) {
          const std::uint64_t g = step.forward ? i : s - 1 - i;
          chain.push_back({EdgeId(segment_base[step.edge.index()] + static_cast<std::uint32_t>(g)), step.forward});
        }
      }
      const std::uint64_t len = chain.size();
      for (std::uint64_t i = 0; i < len; ++i) {
        EdgeRecord& er = next.edges[chain[i].edge.index()];
        er.location = Location::on_curve(k, i, len);
        const VertexId start = chain[i].forward ? er.ends[0] : er.ends[1];
        next.vertex_location[start.index()] = Location::on_curve(k, i, len);
      }
    }
    next.finalize();
    return next;
  }

  void extend_containment() {
    const CellComplex& top = levels_.back();
    const int n = top.level;
    const std::size_t old_v = levels_[static_cast<std::size_t>(n - 1)].vertex_count();
    const std::size_t new_v = top.vertex_count();
    containing_.push_back(top.vertex_tiles);
    // New vertices at coarser levels: parents of the containing tiles one
    // level down.
    std::vector<TileId> buf;
    for (int k = n - 1; k >= 0; --k) {
      const CellComplex& finer = levels_[static_cast<std::size_t>(k + 1)];
      Csr<TileId>& row_k = containing_[static_cast<std::size_t>(k)];
      const Csr<TileId>& row_k1 = containing_[static_cast<std::size_t>(k + 1)];
      for (std::size_t v = old_v; v < new_v; ++v) {
        buf.clear();
        for (TileId t : row_k1.row(v)) buf.push_back(finer.tile_parent[t.index()]);
        std::sort(buf.begin(), buf.end());
        buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
        row_k.push_row(std::span<const TileId>(buf));
      }
    }
  }

  std::shared_ptr<const SubdivisionRule> rule_;
  std::shared_ptr<const detail::RulePatterns> patterns_;
  TowerLimits limits_;
  std::uint64_t degree_bound_ = 1;
  std::vector<CellComplex> levels_;
  std::vector<Csr<TileId>> containing_;
  std::vector<LevelStats> stats_;
  TileId sphere_{0};
};

/// A copy of `tower` one level deeper.
inline Tower subdivide_once(Tower tower) {
  tower.subdivide_once();
  return tower;
}

inline Tower build_tower(SubdivisionRule rule, int depth, TowerLimits limits = {}) {
  if (depth < 0) throw LookupError("depth must be >= 0");
  if (depth > limits.max_depth)
    throw CapExceeded("depth " + std::to_string(depth) + " exceeds the cap " + std::to_string(limits.max_depth));
  Tower tower(std::move(rule), limits);
  if (tower.estimated_bytes(depth) > limits.max_bytes)
    throw CapExceeded("depth " + std::to_string(depth) + " needs about " +
                      std::to_string(tower.estimated_bytes(depth) >> 20) + " MiB, above the cap of " +
                      std::to_string(limits.max_bytes >> 20) + " MiB");
  while (tower.depth() < depth) tower.subdivide_once();
  return tower;
}

/// Parent maps are surjective with exactly d children each, and every tile's
/// parent contains all its corners.
inline ValidationReport validate_tower(const Tower& tower) {
  ValidationReport r;
  const auto d = tower.degree();
  for (int n = 0; n <= tower.depth(); ++n) {
    const CellComplex& c = tower.level(n);
    r.merge(validate_complex(c, d));
    if (n == 0) continue;
    std::vector<std::uint64_t> kids(tower.tile_count(n - 1), 0);
    for (std::size_t t = 0; t < c.tile_count(); ++t) {
      const TileId p = c.tile_parent[t];
      if (p.index() >= kids.size()) {
        r.add("parent violation: tile " + std::to_string(t) + " at level " + std::to_string(n) + " has no parent");
        continue;
      }
      ++kids[p.index()];
      for (VertexId v : c.corners(TileId(static_cast<std::uint32_t>(t)))) {
        auto cont = tower.tiles_containing(v, n - 1);
        if (!std::binary_search(cont.begin(), cont.end(), p))
          r.add("containment violation: parent of tile " + std::to_string(t) + " at level " + std::to_string(n) +
                " misses a corner");
      }
    }
    for (std::size_t p = 0; p < kids.size(); ++p)
      if (kids[p] != d)
        r.add("parent violation: tile " + std::to_string(p) + " at level " + std::to_string(n - 1) + " has " +
              std::to_string(kids[p]) + " children");
  }
  return r;
}

}  // namespace thurston
