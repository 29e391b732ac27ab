// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "dn_oracle.hpp"
#include "grid_model.hpp"
#include "thurston/cli.hpp"

using namespace thurston;

namespace {

int failures = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void counting_laws() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (auto [name, depth] : {std::pair{"lattes-2x2", 6}, std::pair{"lattes-3x3", 4}}) {
    auto tower = build_tower(builtin_rule(name), depth);
    const std::uint64_t m = static_cast<std::uint64_t>(tower.m()), d = tower.degree();
    std::uint64_t dn = 1;
    for (int n = 0; n <= depth; ++n, dn *= d) {
      const CellComplex& c = tower.level(n);
      const auto V = static_cast<std::int64_t>(c.vertex_count()), E = static_cast<std::int64_t>(c.edge_count()),
                 F = static_cast<std::int64_t>(c.tile_count());
      ok &= static_cast<std::uint64_t>(E) == m * dn && static_cast<std::uint64_t>(F) == 2 * dn && V - E + F == 2;
      ok &= validate_complex(c, d).ok();
    }
    detail += std::string(name) + " n<=" + std::to_string(depth) + "; ";
  }
  const double s = seconds_since(t0);
  verdict(1, ok && s < 30, detail + fmt("%.2f s", s));
}

void grid_isomorphism() {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 4);
  bool ok = true;
  std::string why;
  for (int k = 0; k <= 4; ++k) {
    const CellComplex& c = tower.level(k);
    grid::Model g(1 << k);
    auto iso = grid::isomorphism(c, g);
    if (!iso.ok()) {
      ok = false;
      why = "level " + std::to_string(k) + ": " + iso.error;
      break;
    }
    const auto F = c.tile_count();
    for (std::size_t a = 0; a < F; ++a) {
      std::vector<bool> ours(F, false);
      for (VertexId w : c.corners(TileId(static_cast<std::uint32_t>(a))))
        for (TileId t : c.tiles_at(w)) ours[t.index()] = true;
      for (std::size_t b = 0; b < F; ++b) {
        const bool theirs = a == b || g.share_point(iso.tile[a], iso.tile[b]);
        if (ours[b] != theirs) {
          ok = false;
          why = "adjacency differs at level " + std::to_string(k);
        }
      }
    }
  }
  verdict(2, ok, ok ? "lattes-2x2 levels 0..4 isomorphic, adjacency matrices identical" : why);
}

void base_point_law() {
  bool ok = true;
  std::uint64_t nodes = 0;
  for (const auto& name : builtin_rule_names()) {
    auto tower = build_tower(builtin_rule(name), 5);
    TileGraph g(tower);
    auto dist = g.bfs(0, 5);
    for (std::uint32_t i = 0; i < g.node_count(); ++i) ok &= dist[i] == g.level_of(i) + 1;
    nodes += g.node_count();
  }
  verdict(3, ok, std::to_string(nodes) + " nodes over both built-ins at depth 5");
}

void dn_law() {
  bool ok = true;
  std::string detail;
  for (auto [name, depth, base] : {std::tuple{"lattes-2x2", 5, 2ull}, std::tuple{"lattes-3x3", 3, 3ull}}) {
    auto tower = build_tower(builtin_rule(name), depth);
    std::uint64_t p = 1;
    for (int n = 0; n <= depth; ++n, p *= base) {
      auto r = join_sides_dn(tower, n);
      ok &= r.value == p && check_dn(tower, r).ok();
      if (n <= 2) {
        auto ex = oracle::exhaustive_dn(tower, n, r.value);
        ok &= ex && *ex == r.value;
      }
    }
    for (const auto& row : lambda0_estimate(tower)) ok &= row.root == static_cast<double>(base);
    auto l = lattes_criterion(tower);
    for (double c : l.c) ok &= c == 1.0;
    ok &= l.verdict() == "consistent";
    detail += std::string(name) + " D_n=" + std::to_string(base) + "^n n<=" + std::to_string(depth) + "; ";
  }
  verdict(4, ok, detail + "exhaustive = BFS for n<=2, c_n = 1, consistent");
}

void hyperbolicity() {
  std::vector<GromovValue> deltas;
  std::string detail = "lattes-2x2 delta:";
  for (int depth = 3; depth <= 5; ++depth) {
    auto tower = build_tower(builtin_rule("lattes-2x2"), depth);
    TileGraph g(tower);
    DistanceTable dist(g);
    const auto s = depth == 3 ? TripleSampler::all() : TripleSampler::random(100000, 1000 + depth);
    deltas.push_back(hyperbolicity_defect(g, dist, s).value);
    detail += " d" + std::to_string(depth) + "=" + deltas.back().str();
  }
  bool ok = true;
  for (std::size_t i = 1; i < deltas.size(); ++i) ok &= (deltas[i] - deltas[i - 1]) <= GromovValue::whole(1);
  verdict(5, ok, detail + " (exhaustive at 3, 1e5 seeded triples at 4, 5)");
}

void sandwich() {
  bool ok = true;
  std::string detail;
  GromovValue c3, c4;
  for (auto [name, top] : {std::pair{"lattes-2x2", 4}, std::pair{"lattes-3x3", 3}}) {
    detail += std::string(name) + " C':";
    for (int depth = 1; depth <= top; ++depth) {
      auto tower = build_tower(builtin_rule(name), depth);
      TileGraph g(tower);
      DistanceTable dist(g);
      TouchIndex touch(g);
      auto r = sandwich_constants(g, dist, touch, PairSampler::all());
      ok &= r.lower_violations == 0;
      detail += " d" + std::to_string(depth) + "=" + r.upper_defect.str();
      if (std::string(name) == "lattes-2x2" && depth == 3) c3 = r.upper_defect;
      if (std::string(name) == "lattes-2x2" && depth == 4) c4 = r.upper_defect;
    }
    detail += "; ";
  }
  const bool stable = c3 == c4;
  verdict(6, ok && stable,
          detail + "lower bound violations: " + (ok ? "0" : "some") + "; C' equal at 3 and 4: " + (stable ? "yes" : "no"));
}

void acu() {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 5);
  ChainSampler cs;
  cs.count = 10000;
  cs.seed = 2024;
  auto r = curvature_report(tower, cs);
  std::string detail = "c at kappa:";
  for (const auto& row : r.acu.rows) detail += fmt(" %.3g", row.defect);
  detail += "; at 4kappa:";
  for (const auto& row : r.acu_control.rows) detail += fmt(" %.3g", row.defect);
  verdict(7, r.acu_bounded && r.control_increasing && r.acu.rows.size() == 5, detail);
}

void point_quantities() {
  bool ok = true;
  std::string detail;
  for (const auto& name : builtin_rule_names()) {
    int gaps[2] = {0, 0};
    for (int depth : {3, 4}) {
      auto tower = build_tower(builtin_rule(name), depth);
      PointMetric pm(tower);
      const auto V = static_cast<std::uint32_t>(tower.level(depth).vertex_count());
      int gap = std::numeric_limits<int>::min();
      std::uint64_t violations = 0;
      for (std::uint32_t x = 0; x < V; ++x)
        for (std::uint32_t y = x + 1; y < V; ++y) {
          const auto px = pm.point(VertexId(x)), py = pm.point(VertexId(y));
          const auto m = pm.m(px, py), mp = pm.m_prime(px, py);
          if (!m.finite() || !mp.finite()) continue;
          violations += mp.value > m.value + 1;
          gap = std::max(gap, m.value - mp.value);
        }
      ok &= violations == 0;
      gaps[depth - 3] = gap;
    }
    ok &= gaps[0] == gaps[1];
    detail += std::string(name) + " max(m-m') d3=" + std::to_string(gaps[0]) + " d4=" + std::to_string(gaps[1]) + "; ";
  }
  verdict(8, ok, detail + "m' <= m+1 on every conclusive pair");
}

void charvisual() {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 6);
  auto p = charvisual_profile(tower, std::sqrt(static_cast<double>(tower.degree())), 1, 4);
  bool ok = p.within(4.0);
  for (const auto& row : p.rows) ok &= row.inconclusive == 0;
  verdict(9, ok, fmt("lattes-2x2 depth 6, levels 1..4, band %.3g (tolerance 4)", p.band));
}

void determinism() {
  auto once = [] {
    const char* argv[] = {"thurston", "curvature", "--rule", "lattes-2x2", "--depth", "5", "--seed", "7"};
    std::ostringstream out, err;
    const int code = run_command(8, argv, out, err);
    return std::pair{code, out.str()};
  };
  auto a = once(), b = once();
  verdict(10, a.first == 0 && b.first == 0 && a.second == b.second && !a.second.empty(),
          "two curvature runs, " + std::to_string(a.second.size()) + " bytes each");
}

}  // namespace

int main() {
  counting_laws();
  grid_isomorphism();
  base_point_law();
  dn_law();
  hyperbolicity();
  sandwich();
  acu();
  point_quantities();
  charvisual();
  determinism();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
