#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "thurston/random.hpp"
#include "thurston/subdivide.hpp"

namespace thurston {

/// A vertex of the tile graph: a tile at some level, S² being (-1, 0).
struct TileNode {
  int level = -1;
  TileId tile{0};

  static TileNode sphere() { return {-1, TileId(0)}; }
  [[nodiscard]] std::string label() const { return "L" + std::to_string(level) + ":T" + std::to_string(tile.value); }
  friend auto operator<=>(const TileNode&, const TileNode&) = default;
};

/// A half-integer kept as twice its value so comparisons stay exact.
struct GromovValue {
  std::int64_t doubled = 0;

  [[nodiscard]] double value() const { return static_cast<double>(doubled) / 2.0; }
  [[nodiscard]] std::string str() const {
    const std::int64_t a = doubled < 0 ? -doubled : doubled;
    std::string s = doubled < 0 ? "-" : "";
    return a % 2 == 0 ? s + std::to_string(a / 2) : s + std::to_string(a) + "/2";
  }
  static GromovValue whole(std::int64_t v) { return {2 * v}; }
  friend auto operator<=>(const GromovValue&, const GromovValue&) = default;
  friend GromovValue operator-(GromovValue a, GromovValue b) { return {a.doubled - b.doubled}; }
};

/// Result of m(X,Y) = min{ℓ(X), ℓ(Y), m̄(X,Y)}.
///
/// m itself is always settled by levels ≤ min ℓ, because the property
/// "some k-tiles touching X and Y meet" is inherited by parents. Only m̄ can
/// run past the built depth.
struct MResult {
  int m = -1;
  /// X ∩ Y ≠ ∅, in which case m̄ = +∞ and `m_bar` stays empty.
  bool intersect = false;
  /// m̄ for disjoint tiles, when the tower is deep enough to see it.
  std::optional<int> m_bar;
  bool m_bar_inconclusive = false;
  /// Non-disjoint m-tiles touching X and Y.
  TileNode witness_x, witness_y;
};

/// The graph on all tiles of levels -1..max_level of a tower.
class TileGraph {
 public:
  explicit TileGraph(const Tower& tower, std::optional<int> max_level = std::nullopt)
      : tower_(&tower), max_level_(max_level.value_or(tower.depth())) {
    if (max_level_ < -1 || max_level_ > tower.depth()) throw LookupError("graph level beyond built depth");
    offset_.push_back(0);
    for (int n = -1; n <= max_level_; ++n)
      offset_.push_back(offset_.back() + static_cast<std::uint32_t>(tower.tile_count(n)));
    build_adjacency();
  }

  [[nodiscard]] const Tower& tower() const { return *tower_; }
  [[nodiscard]] int max_level() const { return max_level_; }
  [[nodiscard]] std::size_t node_count() const { return offset_.back(); }
  /// Nodes with level ≤ n occupy ids [0, node_count_through(n)).
  [[nodiscard]] std::size_t node_count_through(int n) const { return offset_[static_cast<std::size_t>(n + 2)]; }

  [[nodiscard]] bool contains(TileNode x) const {
    return x.level >= -1 && x.level <= max_level_ && x.tile.index() < tower_->tile_count(x.level);
  }
  [[nodiscard]] std::uint32_t id(TileNode x) const {
    if (!contains(x)) throw LookupError("unknown node " + x.label());
    return offset_[static_cast<std::size_t>(x.level + 1)] + x.tile.value;
  }
  [[nodiscard]] TileNode node(std::uint32_t id) const {
    if (id >= node_count()) throw LookupError("unknown node id " + std::to_string(id));
    auto it = std::upper_bound(offset_.begin(), offset_.end(), id);
    const auto lv = static_cast<int>(it - offset_.begin()) - 2;
    return {lv, TileId(id - offset_[static_cast<std::size_t>(lv + 1)])};
  }
  [[nodiscard]] int level_of(std::uint32_t id) const { return node(id).level; }
  [[nodiscard]] std::span<const std::uint32_t> neighbors(std::uint32_t id) const { return adjacency_.row(id); }
  [[nodiscard]] std::span<const VertexId> corners(TileNode x) const { return tower_->level(x.level).corners(x.tile); }

  /// X ∩ Y ≠ ∅ for tiles of any levels. The intersection is a subcomplex of
  /// the finer level, so it contains a corner of the finer tile.
  [[nodiscard]] bool intersects(TileNode x, TileNode y) const {
    check(x);
    check(y);
    if (x.level > y.level) std::swap(x, y);
    if (x.level == -1) return true;
    for (VertexId w : corners(y)) {
      auto c = tower_->tiles_containing(w, x.level);
      if (std::binary_search(c.begin(), c.end(), x.tile)) return true;
    }
    return false;
  }

  /// Edge rule: levels differ by at most one and the tiles meet. No loops.
  [[nodiscard]] bool adjacent(TileNode x, TileNode y) const {
    check(x);
    check(y);
    if (x == y) return false;
    if (std::abs(x.level - y.level) > 1) return false;
    return intersects(x, y);
  }

  /// Vertex-counted BFS from `source` over nodes of level ≤ level_cap.
  /// Unreached nodes get -1.
  [[nodiscard]] std::vector<int> bfs(std::uint32_t source, int level_cap) const {
    const std::size_t n = node_count_through(level_cap);
    std::vector<int> dist(n, -1);
    if (source >= n) return dist;
    std::vector<std::uint32_t> queue{source};
    dist[source] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const std::uint32_t u = queue[h];
      for (std::uint32_t v : neighbors(u))
        if (v < n && dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    return dist;
  }

  /// η(X,Y). The search never leaves levels ≤ max(ℓ(X), ℓ(Y)): a deeper
  /// path vertex can be swapped for its parent without breaking adjacency.
  [[nodiscard]] int path_distance(TileNode x, TileNode y) const {
    const std::uint32_t a = id(x), b = id(y);
    if (a == b) return 0;
    const int cap = std::max(x.level, y.level);
    const std::size_t n = node_count_through(cap);
    std::vector<int> dist(n, -1);
    std::vector<std::uint32_t> queue{a};
    dist[a] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const std::uint32_t u = queue[h];
      for (std::uint32_t v : neighbors(u)) {
        if (v >= n || dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        if (v == b) return dist[v];
        queue.push_back(v);
      }
    }
    throw InvariantViolation("tile graph is disconnected");
  }

  [[nodiscard]] static GromovValue product_from_distance(int lx, int ly, int eta) { return {lx + ly - eta + 2}; }

  [[nodiscard]] GromovValue gromov_product(TileNode x, TileNode y) const {
    return product_from_distance(x.level, y.level, path_distance(x, y));
  }

  /// Sorted k-vertices of the k-tiles that meet X (k ≥ 0).
  [[nodiscard]] std::vector<VertexId> touch_vertices(TileNode x, int k) const {
    check(x);
    if (k < 0 || k > tower_->depth()) throw LookupError("touch level out of range");
    const CellComplex& ck = tower_->level(k);
    std::vector<TileId> tiles;
    if (x.level == -1) {
      std::vector<VertexId> all(ck.vertex_count());
      for (std::size_t v = 0; v < all.size(); ++v) all[v] = VertexId(static_cast<std::uint32_t>(v));
      return all;
    }
    if (k <= x.level) {
      for (VertexId w : corners(x)) {
        auto c = tower_->tiles_containing(w, k);
        tiles.insert(tiles.end(), c.begin(), c.end());
      }
    } else {
      // k-vertices inside X are the corners of X's k-descendants.
      std::uint32_t lo = x.tile.value, hi = x.tile.value + 1;
      for (int n = x.level; n < k; ++n) {
        lo = tower_->children(n, TileId(lo)).first;
        hi = tower_->children(n, TileId(hi - 1)).second;
      }
      std::vector<VertexId> inside;
      for (std::uint32_t t = lo; t < hi; ++t) {
        auto c = ck.corners(TileId(t));
        inside.insert(inside.end(), c.begin(), c.end());
      }
      std::sort(inside.begin(), inside.end());
      inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
      for (VertexId w : inside) {
        auto c = ck.tiles_at(w);
        tiles.insert(tiles.end(), c.begin(), c.end());
      }
    }
    std::sort(tiles.begin(), tiles.end());
    tiles.erase(std::unique(tiles.begin(), tiles.end()), tiles.end());
    std::vector<VertexId> verts;
    for (TileId t : tiles) {
      auto c = ck.corners(t);
      verts.insert(verts.end(), c.begin(), c.end());
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
  }

  /// Some k-tile meeting X and some k-tile meeting Y intersect.
  [[nodiscard]] bool touch_meet(TileNode x, TileNode y, int k) const {
    if (k < 0 || x.level == -1 || y.level == -1) return true;
    return sorted_overlap(touch_vertices(x, k), touch_vertices(y, k)).has_value();
  }

  [[nodiscard]] MResult m_graph(TileNode x, TileNode y) const {
    check(x);
    check(y);
    MResult r;
    const int lo = std::min(x.level, y.level);
    r.intersect = intersects(x, y);
    int k = lo;
    while (k >= 0 && !touch_meet(x, y, k)) --k;
    r.m = k;
    std::tie(r.witness_x, r.witness_y) = meeting_pair(x, y, k);
    if (!r.intersect) {
      int bar = k;
      if (bar == lo)
        while (bar < tower_->depth() && touch_meet(x, y, bar + 1)) ++bar;
      if (bar == tower_->depth())
        r.m_bar_inconclusive = true;
      else
        r.m_bar = bar;
    }
    return r;
  }

  /// A k-tile meeting X and a k-tile meeting Y that intersect.
  [[nodiscard]] std::pair<TileNode, TileNode> meeting_pair(TileNode x, TileNode y, int k) const {
    if (k < 0) return {TileNode::sphere(), TileNode::sphere()};
    const CellComplex& ck = tower_->level(k);
    auto tx = touching_tiles(x, k);
    auto ty = touching_tiles(y, k);
    for (TileId a : tx)
      for (TileId b : ty) {
        auto ca = ck.corners(a);
        for (VertexId w : ck.corners(b))
          if (std::find(ca.begin(), ca.end(), w) != ca.end()) return {{k, a}, {k, b}};
      }
    throw InvariantViolation("no meeting pair at level " + std::to_string(k));
  }

  /// k-tiles meeting X, sorted.
  [[nodiscard]] std::vector<TileId> touching_tiles(TileNode x, int k) const {
    const CellComplex& ck = tower_->level(k);
    std::vector<TileId> out;
    if (x.level == -1 || k > x.level) {
      for (std::size_t t = 0; t < ck.tile_count(); ++t)
        if (intersects(x, {k, TileId(static_cast<std::uint32_t>(t))})) out.push_back(TileId(static_cast<std::uint32_t>(t)));
      return out;
    }
    for (VertexId w : corners(x)) {
      auto c = tower_->tiles_containing(w, k);
      out.insert(out.end(), c.begin(), c.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  template <class T>
  static std::optional<T> sorted_overlap(const std::vector<T>& a, const std::vector<T>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return a[i];
      if (a[i] < b[j])
        ++i;
      else
        ++j;
    }
    return std::nullopt;
  }

  void check(TileNode x) const {
    if (!contains(x)) throw LookupError("unknown node " + x.label());
  }

  void build_adjacency() {
    const std::size_t n = node_count();
    std::vector<std::vector<std::uint32_t>> rows(n);
    auto link = [&](std::uint32_t a, std::uint32_t b) {
      rows[a].push_back(b);
      rows[b].push_back(a);
    };
    if (max_level_ >= 0) {
      link(0, id({0, TileId(0)}));
      link(0, id({0, TileId(1)}));
    }
    for (int lv = 0; lv <= max_level_; ++lv) {
      const CellComplex& c = tower_->level(lv);
      for (std::size_t t = 0; t < c.tile_count(); ++t) {
        const TileId tid(static_cast<std::uint32_t>(t));
        const std::uint32_t self = id({lv, tid});
        std::vector<TileId> same, up;
        for (VertexId w : c.corners(tid)) {
          auto s = c.tiles_at(w);
          same.insert(same.end(), s.begin(), s.end());
          if (lv > 0) {
            auto u = tower_->tiles_containing(w, lv - 1);
            up.insert(up.end(), u.begin(), u.end());
          }
        }
        std::sort(same.begin(), same.end());
        same.erase(std::unique(same.begin(), same.end()), same.end());
        for (TileId o : same)
          if (o.value > tid.value) link(self, id({lv, o}));
        std::sort(up.begin(), up.end());
        up.erase(std::unique(up.begin(), up.end()), up.end());
        for (TileId o : up) link(self, id({lv - 1, o}));
      }
    }
    adjacency_.reserve(n, 0);
    for (auto& r : rows) {
      std::sort(r.begin(), r.end());
      adjacency_.push_row(std::span<const std::uint32_t>(r));
    }
  }

  const Tower* tower_;
  int max_level_;
  std::vector<std::uint32_t> offset_;  // offset_[lv+1] = first id at level lv
  Csr<std::uint32_t> adjacency_;
};

/// All-pairs η over the graph, from one BFS per node over the whole graph.
class DistanceTable {
 public:
  explicit DistanceTable(const TileGraph& g, std::uint64_t max_bytes = std::uint64_t{512} << 20)
      : n_(g.node_count()) {
    if (static_cast<std::uint64_t>(n_) * n_ > max_bytes)
      throw CapExceeded("distance table for " + std::to_string(n_) + " nodes exceeds " +
                        std::to_string(max_bytes >> 20) + " MiB");
    data_.assign(n_ * n_, 0);
    std::vector<std::uint32_t> queue;
    std::vector<int> dist(n_);
    for (std::uint32_t s = 0; s < n_; ++s) {
      std::fill(dist.begin(), dist.end(), -1);
      queue.assign(1, s);
      dist[s] = 0;
      for (std::size_t h = 0; h < queue.size(); ++h) {
        const std::uint32_t u = queue[h];
        for (std::uint32_t v : g.neighbors(u))
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            queue.push_back(v);
          }
      }
      for (std::size_t v = 0; v < n_; ++v) {
        THURSTON_CHECK(dist[v] >= 0 && dist[v] < 255, "distance out of range");
        data_[s * n_ + v] = static_cast<std::uint8_t>(dist[v]);
      }
    }
    levels_.resize(n_);
    for (std::uint32_t i = 0; i < n_; ++i) levels_[i] = g.level_of(i);
  }

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] int operator()(std::uint32_t a, std::uint32_t b) const { return data_[a * n_ + b]; }
  [[nodiscard]] int level(std::uint32_t a) const { return levels_[a]; }
  [[nodiscard]] GromovValue product(std::uint32_t a, std::uint32_t b) const {
    return TileGraph::product_from_distance(levels_[a], levels_[b], (*this)(a, b));
  }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> data_;
  std::vector<int> levels_;
};

/// Sorted vertex sets V_k(X) for every node X and every 0 ≤ k ≤ ℓ(X), so
/// that m(X,Y) over many pairs is a few set intersections.
class TouchIndex {
 public:
  explicit TouchIndex(const TileGraph& g) : graph_(&g) {
    rows_.resize(g.node_count());
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
      const TileNode x = g.node(i);
      for (int k = 0; k <= x.level; ++k) rows_[i].push_back(g.touch_vertices(x, k));
    }
  }

  [[nodiscard]] bool meet(std::uint32_t a, std::uint32_t b, int k) const {
    if (k < 0) return true;
    const auto& va = rows_[a][static_cast<std::size_t>(k)];
    const auto& vb = rows_[b][static_cast<std::size_t>(k)];
    std::size_t i = 0, j = 0;
    while (i < va.size() && j < vb.size()) {
      if (va[i] == vb[j]) return true;
      if (va[i] < vb[j])
        ++i;
      else
        ++j;
    }
    return false;
  }

  /// m(X,Y) only; see TileGraph::m_graph for m̄ and witnesses.
  [[nodiscard]] int m(std::uint32_t a, std::uint32_t b) const {
    int k = std::min(graph_->level_of(a), graph_->level_of(b));
    while (k >= 0 && !meet(a, b, k)) --k;
    return k;
  }

 private:
  const TileGraph* graph_;
  std::vector<std::vector<std::vector<VertexId>>> rows_;
};

// ---------------------------------------------------------------------------
// Samplers

struct TripleSampler {
  bool exhaustive = true;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;

  static TripleSampler all() { return {true, 0, 0}; }
  static TripleSampler random(std::uint64_t count, std::uint64_t seed) { return {false, count, seed}; }
};
using PairSampler = TripleSampler;

struct DefectResult {
  GromovValue value;
  std::array<TileNode, 3> witness{};
  std::uint64_t samples = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;
};

/// δ over sampled triples: max of min{(X,Z),(Z,Y)} − (X,Y), floored at 0.
inline DefectResult hyperbolicity_defect(const TileGraph& g, const DistanceTable& dist, const TripleSampler& s) {
  const auto n = static_cast<std::uint32_t>(g.node_count());
  if (n == 0 || (!s.exhaustive && s.count == 0)) throw LookupError("empty triple sample");
  DefectResult r;
  r.exhaustive = s.exhaustive;
  r.seed = s.seed;
  r.witness = {TileNode::sphere(), TileNode::sphere(), TileNode::sphere()};
  std::array<std::uint32_t, 3> best{0, 0, 0};
  auto visit = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    const auto d = std::min(dist.product(x, z), dist.product(z, y)) - dist.product(x, y);
    if (d > r.value) {
      r.value = d;
      best = {x, y, z};
    }
  };
  if (s.exhaustive) {
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t y = x; y < n; ++y)
        for (std::uint32_t z = 0; z < n; ++z) visit(x, y, z);
    r.samples = static_cast<std::uint64_t>(n) * (n + 1) / 2 * n;
  } else {
    Rng rng(s.seed);
    for (std::uint64_t i = 0; i < s.count; ++i) {
      const auto x = static_cast<std::uint32_t>(uniform_below(rng, n));
      const auto y = static_cast<std::uint32_t>(uniform_below(rng, n));
      const auto z = static_cast<std::uint32_t>(uniform_below(rng, n));
      visit(x, y, z);
    }
    r.samples = s.count;
  }
  r.witness = {g.node(best[0]), g.node(best[1]), g.node(best[2])};
  return r;
}

struct SandwichResult {
  /// max of m − (X,Y); the lower bound m − 1 ≤ (X,Y) means this is ≤ 1.
  GromovValue lower_defect{std::numeric_limits<std::int64_t>::min()};
  /// Observed C′: max of (X,Y) − m.
  GromovValue upper_defect{std::numeric_limits<std::int64_t>::min()};
  std::uint64_t pairs = 0;
  std::uint64_t lower_violations = 0;
  std::pair<TileNode, TileNode> lower_witness, upper_witness;
};

inline SandwichResult sandwich_constants(const TileGraph& g, const DistanceTable& dist, const TouchIndex& touch,
                                         const PairSampler& s) {
  const auto n = static_cast<std::uint32_t>(g.node_count());
  if (n == 0 || (!s.exhaustive && s.count == 0)) throw LookupError("no conclusive pairs");
  SandwichResult r;
  auto visit = [&](std::uint32_t x, std::uint32_t y) {
    const GromovValue m = GromovValue::whole(touch.m(x, y));
    const GromovValue p = dist.product(x, y);
    ++r.pairs;
    if (m - p > GromovValue::whole(1)) ++r.lower_violations;
    if (m - p > r.lower_defect) {
      r.lower_defect = m - p;
      r.lower_witness = {g.node(x), g.node(y)};
    }
    if (p - m > r.upper_defect) {
      r.upper_defect = p - m;
      r.upper_witness = {g.node(x), g.node(y)};
    }
  };
  if (s.exhaustive) {
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t y = x; y < n; ++y) visit(x, y);
  } else {
    Rng rng(s.seed);
    for (std::uint64_t i = 0; i < s.count; ++i) {
      const auto x = static_cast<std::uint32_t>(uniform_below(rng, n));
      visit(x, static_cast<std::uint32_t>(uniform_below(rng, n)));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// AC_u(κ)

struct Chain {
  std::vector<std::uint32_t> nodes;  // graph node ids
  std::string kind;
};

/// min_i (X_{i-1},X_i) − log(n)/√−κ − (X_0,X_n) over a chain of n steps.
inline double chain_defect(const DistanceTable& dist, const Chain& c, double kappa) {
  if (!(kappa < 0)) throw LookupError("kappa must be negative");
  if (c.nodes.size() < 2) throw LookupError("chain needs at least one step");
  GromovValue lo{std::numeric_limits<std::int64_t>::max()};
  for (std::size_t i = 1; i < c.nodes.size(); ++i) lo = std::min(lo, dist.product(c.nodes[i - 1], c.nodes[i]));
  const double steps = static_cast<double>(c.nodes.size() - 1);
  return lo.value() - std::log(steps) / std::sqrt(-kappa) - dist.product(c.nodes.front(), c.nodes.back()).value();
}

struct AcuRow {
  int level = 0;  // deepest level visited by the chains in this row
  double defect = 0.0;
  std::uint64_t chains = 0;
  std::string worst_kind;
};

struct AcuResult {
  double kappa = 0.0;
  double overall = 0.0;
  std::vector<AcuRow> rows;
};

/// Observed c per deepest chain level, floored at 0.
inline AcuResult acu_defect(const DistanceTable& dist, double kappa, const std::vector<Chain>& chains) {
  if (!(kappa < 0)) throw LookupError("kappa must be negative");
  AcuResult r;
  r.kappa = kappa;
  std::map<int, AcuRow> rows;
  for (const Chain& c : chains) {
    int top = -1;
    for (auto v : c.nodes) top = std::max(top, dist.level(v));
    AcuRow& row = rows[top];
    row.level = top;
    const double d = std::max(0.0, chain_defect(dist, c, kappa));
    if (row.chains == 0 || d > row.defect) {
      row.defect = d;
      row.worst_kind = c.kind;
    }
    ++row.chains;
    r.overall = std::max(r.overall, d);
  }
  for (auto& [lv, row] : rows) r.rows.push_back(row);
  return r;
}

struct ChainSampler {
  std::uint64_t count = 10000;
  std::uint64_t seed = 0;
  std::uint64_t max_walk = 64;
  std::uint64_t max_waypoints = 6;
};

/// Random walks and geodesic concatenations, spread evenly over the
/// top levels 1..max_level. A chain bucketed at level n starts at an n-tile
/// and never goes deeper than n.
inline std::vector<Chain> sample_chains(const TileGraph& g, const DistanceTable& dist, const ChainSampler& s) {
  std::vector<Chain> out;
  const int top = g.max_level();
  if (top < 1 || s.count == 0) return out;
  Rng rng(s.seed);
  auto random_tile = [&](int lv) {
    const auto lo = static_cast<std::uint32_t>(g.node_count_through(lv - 1));
    const auto hi = static_cast<std::uint32_t>(g.node_count_through(lv));
    return lo + static_cast<std::uint32_t>(uniform_below(rng, hi - lo));
  };
  // Deterministic geodesic: step to the lowest-id neighbor one closer.
  auto geodesic = [&](std::uint32_t a, std::uint32_t b, int cap, std::vector<std::uint32_t>& path) {
    std::uint32_t u = a;
    while (u != b) {
      std::uint32_t next = u;
      for (std::uint32_t v : g.neighbors(u))
        if (dist.level(v) <= cap && dist(v, b) + 1 == dist(u, b)) {
          next = v;
          break;
        }
      THURSTON_CHECK(next != u, "no geodesic step within the level cap");
      path.push_back(next);
      u = next;
    }
  };
  for (std::uint64_t i = 0; i < s.count; ++i) {
    const int lv = 1 + static_cast<int>(i % static_cast<std::uint64_t>(top));
    Chain c;
    c.nodes.push_back(random_tile(lv));
    if (i % 2 == 0) {
      c.kind = "walk";
      const auto len = uniform_between(rng, 1, s.max_walk);
      for (std::uint64_t step = 0; step < len; ++step) {
        std::vector<std::uint32_t> options;
        for (std::uint32_t v : g.neighbors(c.nodes.back()))
          if (dist.level(v) <= lv) options.push_back(v);
        c.nodes.push_back(options[uniform_below(rng, options.size())]);
      }
    } else {
      c.kind = "geodesics";
      const auto stops = uniform_between(rng, 1, s.max_waypoints);
      for (std::uint64_t w = 0; w < stops; ++w) {
        const std::uint32_t target = random_tile(lv);
        if (target == c.nodes.back()) continue;
        geodesic(c.nodes.back(), target, lv, c.nodes);
      }
      if (c.nodes.size() < 2)
        for (std::uint32_t v : g.neighbors(c.nodes.back()))
          if (dist.level(v) == lv) {
            c.nodes.push_back(v);
            break;
          }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace thurston
