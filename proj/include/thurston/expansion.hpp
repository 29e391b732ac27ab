#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thurston/tile_graph.hpp"

namespace thurston {

struct DnResult {
  int n = 0;
  std::uint64_t value = 0;
  /// Ordered tiles at level n; a path for m ≥ 4, three merged paths for m = 3.
  std::vector<TileId> witness;
  /// The two disjoint 0-edges joined (m ≥ 4) or all three 0-edges (m = 3).
  std::vector<std::uint32_t> zero_edges;
};

namespace detail {

/// Tiles of one level sharing at least one vertex with `t`.
inline void same_level_neighbors(const CellComplex& c, TileId t, std::vector<TileId>& out) {
  out.clear();
  for (VertexId w : c.corners(t))
    for (TileId u : c.tiles_at(w))
      if (u != t) out.push_back(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

/// Vertex-counted multi-source BFS: sources sit at distance 1.
inline std::vector<std::uint32_t> tile_bfs(const CellComplex& c, std::uint32_t zero_edge,
                                           std::vector<std::uint32_t>* parent = nullptr) {
  const std::size_t F = c.tile_count();
  std::vector<std::uint32_t> dist(F, 0);
  if (parent) parent->assign(F, kInvalidIndex);
  std::vector<std::uint32_t> queue;
  for (std::size_t t = 0; t < F; ++t)
    if (on_zero_edge(c, TileId(static_cast<std::uint32_t>(t)), zero_edge)) {
      dist[t] = 1;
      queue.push_back(static_cast<std::uint32_t>(t));
    }
  std::vector<TileId> nb;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::uint32_t u = queue[h];
    same_level_neighbors(c, TileId(u), nb);
    for (TileId v : nb)
      if (dist[v.index()] == 0) {
        dist[v.index()] = dist[u] + 1;
        if (parent) (*parent)[v.index()] = u;
        queue.push_back(v.value);
      }
  }
  return dist;
}

inline std::vector<TileId> path_back(const std::vector<std::uint32_t>& parent, std::uint32_t from) {
  std::vector<TileId> path;
  for (std::uint32_t u = from; u != kInvalidIndex; u = parent[u]) path.push_back(TileId(u));
  return path;
}

}  // namespace detail

/// Pairs of 0-edges with no common endpoint.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> disjoint_zero_edges(const Tower& tower) {
  const CellComplex& c0 = tower.level(0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t a = 0; a < c0.edge_count(); ++a)
    for (std::uint32_t b = a + 1; b < c0.edge_count(); ++b) {
      const auto& ea = c0.edges[a].ends;
      const auto& eb = c0.edges[b].ends;
      if (ea[0] != eb[0] && ea[0] != eb[1] && ea[1] != eb[0] && ea[1] != eb[1]) out.push_back({a, b});
    }
  return out;
}

/// D_n: the fewest n-tiles in a connected set joining opposite sides of C.
inline DnResult join_sides_dn(const Tower& tower, int n) {
  if (n < 0 || n > tower.depth()) throw LookupError("level " + std::to_string(n) + " is not built");
  const CellComplex& c = tower.level(n);
  DnResult r;
  r.n = n;
  r.value = std::numeric_limits<std::uint64_t>::max();
  if (tower.m() >= 4) {
    for (auto [a, b] : disjoint_zero_edges(tower)) {
      std::vector<std::uint32_t> parent;
      auto dist = detail::tile_bfs(c, a, &parent);
      for (std::size_t t = 0; t < c.tile_count(); ++t) {
        if (!on_zero_edge(c, TileId(static_cast<std::uint32_t>(t)), b) || dist[t] >= r.value) continue;
        r.value = dist[t];
        r.witness = detail::path_back(parent, static_cast<std::uint32_t>(t));
        r.zero_edges = {a, b};
      }
    }
    return r;
  }
  // m = 3: a minimal connected set meeting three sides is a tree with at most
  // three leaves, so it is the union of shortest chains from one center tile.
  std::array<std::vector<std::uint32_t>, 3> parent, dist;
  for (std::uint32_t k = 0; k < 3; ++k) dist[k] = detail::tile_bfs(c, k, &parent[k]);
  std::uint32_t center = 0;
  for (std::uint32_t t = 0; t < c.tile_count(); ++t) {
    const std::uint64_t v = std::uint64_t{dist[0][t]} + dist[1][t] + dist[2][t] - 2;
    if (v < r.value) {
      r.value = v;
      center = t;
    }
  }
  r.zero_edges = {0, 1, 2};
  for (std::uint32_t k = 0; k < 3; ++k)
    for (TileId t : detail::path_back(parent[k], center))
      if (std::find(r.witness.begin(), r.witness.end(), t) == r.witness.end()) r.witness.push_back(t);
  THURSTON_CHECK(r.witness.size() == r.value, "Steiner witness size differs from D_n");
  return r;
}

/// Witness invariants: connected, exactly D_n tiles, meets the required
/// 0-edges, and the joined edges are disjoint when m ≥ 4.
inline ValidationReport check_dn(const Tower& tower, const DnResult& r) {
  ValidationReport rep;
  const CellComplex& c = tower.level(r.n);
  if (r.witness.size() != r.value)
    rep.add("cardinality violation: witness has " + std::to_string(r.witness.size()) + " tiles, D_n = " +
            std::to_string(r.value));
  std::vector<TileId> sorted = r.witness;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) rep.add("cardinality violation: repeated tile");
  for (std::uint32_t k : r.zero_edges) {
    bool meets = false;
    for (TileId t : r.witness) meets |= on_zero_edge(c, t, k);
    if (!meets) rep.add("side violation: witness misses 0-edge " + std::to_string(k));
  }
  if (tower.m() >= 4) {
    auto pairs = disjoint_zero_edges(tower);
    if (r.zero_edges.size() != 2 ||
        std::find(pairs.begin(), pairs.end(), std::pair{r.zero_edges[0], r.zero_edges[1]}) == pairs.end())
      rep.add("side violation: joined 0-edges are not disjoint");
  } else if (r.zero_edges.size() != 3) {
    rep.add("side violation: m = 3 needs all three 0-edges");
  }
  if (!r.witness.empty()) {
    std::vector<bool> seen(r.witness.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::vector<TileId> nb;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      detail::same_level_neighbors(c, r.witness[i], nb);
      for (std::size_t j = 0; j < r.witness.size(); ++j)
        if (!seen[j] && std::binary_search(nb.begin(), nb.end(), r.witness[j])) {
          seen[j] = true;
          stack.push_back(j);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) rep.add("connectivity violation: witness is split");
  }
  return rep;
}

struct Lambda0Row {
  int n = 0;
  std::uint64_t dn = 0;
  double root = 0.0;   // D_n^{1/n}
  double ratio = 0.0;  // D_n / D_{n-1}
};

inline std::vector<Lambda0Row> lambda0_estimate(const Tower& tower) {
  if (tower.depth() < 2) throw LookupError("the expansion table needs depth >= 2");
  std::vector<Lambda0Row> rows;
  std::uint64_t prev = join_sides_dn(tower, 0).value;
  for (int n = 1; n <= tower.depth(); ++n) {
    const std::uint64_t dn = join_sides_dn(tower, n).value;
    rows.push_back({n, dn, std::pow(static_cast<double>(dn), 1.0 / n), static_cast<double>(dn) / static_cast<double>(prev)});
    prev = dn;
  }
  return rows;
}

struct LattesResult {
  std::vector<double> c;  // c_n = D_n / d^{n/2}, n = 0..depth
  double threshold = 0.9;
  bool violated = false;
  int violated_at = -1;
  [[nodiscard]] std::string verdict() const {
    return violated ? "violated(" + std::to_string(violated_at) + ")" : "consistent";
  }
};

/// Finite-depth heuristic: "violated(n)" iff over the last three levels each
/// step shrinks c by at least the threshold factor.
inline LattesResult lattes_verdict(std::vector<double> c, double threshold) {
  LattesResult r;
  r.c = std::move(c);
  r.threshold = threshold;
  if (r.c.size() < 2) return r;
  const std::size_t first = r.c.size() >= 3 ? r.c.size() - 3 : 0;
  bool decays = true;
  for (std::size_t j = first; j + 1 < r.c.size(); ++j) decays &= r.c[j + 1] <= threshold * r.c[j];
  if (decays) {
    r.violated = true;
    r.violated_at = static_cast<int>(r.c.size()) - 1;
  }
  return r;
}

inline LattesResult lattes_criterion(const Tower& tower, double threshold = 0.9) {
  if (tower.depth() < 1) throw LookupError("the criterion needs depth >= 1");
  std::vector<double> c;
  const double d = static_cast<double>(tower.degree());
  for (int n = 0; n <= tower.depth(); ++n)
    c.push_back(static_cast<double>(join_sides_dn(tower, n).value) / std::pow(d, n / 2.0));
  return lattes_verdict(std::move(c), threshold);
}

/// −¼ log²(d).
inline double quarter_log_squared(std::uint64_t degree) {
  const double l = std::log(static_cast<double>(degree));
  return -0.25 * l * l;
}

/// D_n witnesses as graph chains (n ≥ 1, at least two tiles).
inline std::vector<Chain> dn_witness_chains(const TileGraph& g) {
  std::vector<Chain> out;
  for (int n = 1; n <= g.max_level(); ++n) {
    auto r = join_sides_dn(g.tower(), n);
    if (r.witness.size() < 2) continue;
    Chain c;
    c.kind = "dn-witness";
    for (TileId t : r.witness) c.nodes.push_back(g.id({n, t}));
    out.push_back(std::move(c));
  }
  return out;
}

/// Finite-depth reading of "bounded": the per-level defects do not rise
/// over the last three levels.
inline bool acu_bounded(const AcuResult& r) {
  const std::size_t n = r.rows.size();
  for (std::size_t i = n >= 3 ? n - 2 : 1; i < n; ++i)
    if (r.rows[i].defect > r.rows[i - 1].defect + 1e-12) return false;
  return true;
}

inline bool acu_strictly_increasing(const AcuResult& r) {
  if (r.rows.size() < 2) return false;
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    if (!(r.rows[i].defect > r.rows[i - 1].defect)) return false;
  return true;
}

struct CurvatureReport {
  std::uint64_t degree = 0;
  double ku_lower_bound = 0.0;
  double kappa = 0.0;
  std::vector<Lambda0Row> lambda0;
  LattesResult lattes;
  AcuResult acu;
  bool acu_bounded = false;
  // Same chains at 4*kappa, below the curvature bound; expected to grow.
  AcuResult acu_control;
  bool control_increasing = false;
  std::uint64_t chain_seed = 0;
  std::uint64_t sampled_chains = 0;
  std::string verdict;
};

inline CurvatureReport curvature_report(const Tower& tower, const ChainSampler& chains, double threshold = 0.9,
                                        std::optional<double> kappa_override = std::nullopt) {
  if (tower.depth() < 2) throw LookupError("the curvature report needs depth >= 2");
  CurvatureReport r;
  r.degree = tower.degree();
  r.ku_lower_bound = quarter_log_squared(r.degree);
  r.kappa = kappa_override.value_or(r.ku_lower_bound);
  if (!(r.kappa < 0)) throw LookupError("kappa must be negative");
  r.lambda0 = lambda0_estimate(tower);
  r.lattes = lattes_criterion(tower, threshold);

  TileGraph g(tower);
  DistanceTable dist(g);
  auto all = dn_witness_chains(g);
  auto sampled = sample_chains(g, dist, chains);
  all.insert(all.end(), sampled.begin(), sampled.end());
  r.acu = acu_defect(dist, r.kappa, all);
  r.acu_bounded = acu_bounded(r.acu);
  r.acu_control = acu_defect(dist, 4 * r.kappa, all);
  r.control_increasing = acu_strictly_increasing(r.acu_control);
  r.chain_seed = chains.seed;
  r.sampled_chains = sampled.size();

  if (r.lattes.violated)
    r.verdict = "c_n decays over the last computed levels, so D_n falls below c*deg^(n/2) at this depth; "
                "the map does not look Lattes and AC_u at -1/4 log^2(deg) is not expected (heuristic).";
  else
    r.verdict = "c_n stays bounded below through depth " + std::to_string(tower.depth()) +
                ", consistent with D_n >= c*deg^(n/2); for maps without periodic critical points this is the "
                "Lattes case, where the tile graph is AC_u(kappa) at kappa = -1/4 log^2(deg) (heuristic).";
  return r;
}

}  // namespace thurston
