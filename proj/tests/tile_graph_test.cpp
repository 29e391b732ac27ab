#include <gtest/gtest.h>

#include "thurston/builtin_rules.hpp"
#include "thurston/tile_graph.hpp"

using namespace thurston;

namespace {

// Pillow coordinates: front tiles are row-major from the p_0 corner, back
// tiles follow.
TileNode front(int k, int i, int j) { return {1, TileId(static_cast<std::uint32_t>(j * k + i))}; }
TileNode back(int k, int i, int j) { return {1, TileId(static_cast<std::uint32_t>(k * k + j * k + i))}; }

}  // namespace

TEST(TileGraph, BasePointDistance) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 4);
  TileGraph g(tower);
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    auto x = g.node(i);
    EXPECT_EQ(g.path_distance(x, TileNode::sphere()), x.level + 1) << x.label();
  }
}

TEST(TileGraph, PillowExamples) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 3);
  TileGraph g(tower);
  const TileNode s = TileNode::sphere(), w{0, TileId(0)}, b{0, TileId(1)};
  EXPECT_TRUE(g.adjacent(s, w));
  EXPECT_TRUE(g.adjacent(s, b));
  EXPECT_TRUE(g.adjacent(w, b));
  EXPECT_EQ(g.path_distance(w, b), 1);
  const TileNode tl = front(2, 0, 1), br = back(2, 1, 0);
  EXPECT_FALSE(g.adjacent(tl, br));
  EXPECT_EQ(g.path_distance(tl, br), 2);
  auto m = g.m_graph(tl, br);
  EXPECT_EQ(m.m, 1);
  EXPECT_FALSE(m.intersect);
  EXPECT_EQ(g.gromov_product(s, s).doubled, 0);
  EXPECT_EQ(g.gromov_product(tl, tl), GromovValue::whole(2));
  EXPECT_EQ(g.gromov_product(front(2, 0, 0), front(2, 1, 0)).str(), "3/2");
  EXPECT_EQ(g.m_graph(tl, s).m, -1);
}

TEST(TileGraph, RestrictedBfsMatchesFullTable) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 4);
  TileGraph g(tower);
  DistanceTable dist(g);
  TileGraph g3(tower, 3);
  for (std::uint32_t a = 0; a < g3.node_count(); ++a)
    for (std::uint32_t b = 0; b < g3.node_count(); ++b)
      ASSERT_EQ(g3.path_distance(g3.node(a), g3.node(b)), dist(a, b));
}

TEST(TileGraph, GraphInvariants) {
  auto tower = build_tower(builtin_rule("lattes-3x3"), 3);
  TileGraph g(tower);
  DistanceTable dist(g);
  const auto V = static_cast<std::uint32_t>(g.node_count());
  for (std::uint32_t a = 0; a < V; ++a) {
    for (std::uint32_t b : g.neighbors(a)) {
      ASSERT_NE(a, b);
      auto back = g.neighbors(b);
      ASSERT_TRUE(std::find(back.begin(), back.end(), a) != back.end());
      ASSERT_LE(std::abs(g.level_of(a) - g.level_of(b)), 1);
      ASSERT_TRUE(g.intersects(g.node(a), g.node(b)));
    }
    for (std::uint32_t b = 0; b < V; ++b) ASSERT_GE(dist(a, b), std::abs(g.level_of(a) - g.level_of(b)));
  }
}

TEST(TileGraph, MBarConclusiveAndNot) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 3);
  TileGraph g(tower);
  const TileNode tl = front(2, 0, 1), br = back(2, 1, 0);
  auto r = g.m_graph(tl, br);
  // A back tile on the left seam meets front-TL and shares an edge with a
  // back tile at the center of the back face; the 8x8 strips no longer meet.
  ASSERT_TRUE(r.m_bar.has_value());
  EXPECT_EQ(*r.m_bar, 2);
  EXPECT_TRUE(g.intersects(r.witness_x, r.witness_y));
  EXPECT_TRUE(g.touch_meet(tl, br, 2));
  EXPECT_FALSE(g.touch_meet(tl, br, 3));
  // Two far-apart deepest tiles that are disjoint cannot settle m̄ within the tower.
  const TileNode a{3, TileId(0)};
  for (std::uint32_t t = 0; t < tower.tile_count(3); ++t) {
    const TileNode b{3, TileId(t)};
    if (g.intersects(a, b)) continue;
    auto mb = g.m_graph(a, b);
    if (mb.m == 3) EXPECT_TRUE(mb.m_bar_inconclusive);
    if (mb.m_bar) EXPECT_LT(*mb.m_bar, 3);
  }
  auto same = g.m_graph(tl, tl);
  EXPECT_TRUE(same.intersect);
  EXPECT_EQ(same.m, 1);
}

TEST(TileGraph, SmallDefects) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 2);
  TileGraph g(tower);
  DistanceTable dist(g);
  TouchIndex touch(g);
  const std::uint32_t w = g.id({0, TileId(0)}), b = g.id({0, TileId(1)});
  EXPECT_EQ(touch.m(w, b), 0);
  EXPECT_EQ(dist.product(w, b).str(), "1/2");
  const std::uint32_t x = g.id({2, TileId(5)});
  EXPECT_EQ(dist.product(x, x) - GromovValue::whole(touch.m(x, x)), GromovValue::whole(1));

  auto a = hyperbolicity_defect(g, dist, TripleSampler::all());
  auto again = hyperbolicity_defect(g, dist, TripleSampler::all());
  EXPECT_EQ(a.value, again.value);
  EXPECT_EQ(a.witness, again.witness);
  EXPECT_EQ(hyperbolicity_defect(g, dist, TripleSampler::random(5000, 3)).value,
            hyperbolicity_defect(g, dist, TripleSampler::random(5000, 3)).value);
  EXPECT_THROW(hyperbolicity_defect(g, dist, TripleSampler::random(0, 3)), LookupError);
  EXPECT_THROW(acu_defect(dist, 0.0, {}), LookupError);
  EXPECT_THROW(chain_defect(dist, Chain{{x}, "walk"}, -1.0), LookupError);
}

TEST(TileGraph, MQuasiUltrametricConstantIsStable) {
  auto c_at = [](int depth) {
    auto tower = build_tower(builtin_rule("lattes-2x2"), depth);
    TileGraph g(tower);
    TouchIndex touch(g);
    const auto V = static_cast<std::uint32_t>(g.node_count());
    std::vector<int> m(static_cast<std::size_t>(V) * V);
    for (std::uint32_t a = 0; a < V; ++a)
      for (std::uint32_t b = 0; b < V; ++b) m[a * V + b] = touch.m(a, b);
    int c = 0;
    for (std::uint32_t a = 0; a < V; ++a)
      for (std::uint32_t b = a; b < V; ++b)
        for (std::uint32_t z = 0; z < V; ++z)
          c = std::max(c, std::min(m[a * V + z], m[b * V + z]) - m[a * V + b]);
    return c;
  };
  // Grows to 2 at depth 3, then holds.
  EXPECT_EQ(c_at(3), c_at(4));
}
