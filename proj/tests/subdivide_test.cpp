#include <gtest/gtest.h>

#include "thurston/builtin_rules.hpp"
#include "thurston/subdivide.hpp"

using namespace thurston;

TEST(Subdivide, Pillow2x2RuleIsValid) {
  auto rule = builtin_rule("lattes-2x2");
  auto r = validate_rule(rule);
  for (auto& v : r.violations) ADD_FAILURE() << v;
  EXPECT_EQ(rule.one_skeleton.vertex_count(), 10u);
  EXPECT_EQ(rule.one_skeleton.edge_count(), 16u);
  EXPECT_EQ(rule.one_skeleton.tile_count(), 8u);
}

TEST(Subdivide, Pillow2x2Counts) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 3);
  EXPECT_EQ(tower.level(2).tile_count(), 32u);
  EXPECT_EQ(tower.level(2).edge_count(), 64u);
  EXPECT_EQ(tower.level(3).tile_count(), 128u);
  EXPECT_EQ(tower.level(3).edge_count(), 256u);
  auto r = validate_tower(tower);
  for (auto& v : r.violations) ADD_FAILURE() << v;
}

TEST(Subdivide, DeepTowersStayValid) {
  auto t2 = build_tower(builtin_rule("lattes-2x2"), 7);
  auto t3 = build_tower(builtin_rule("lattes-3x3"), 5);
  EXPECT_TRUE(validate_tower(t2).ok());
  EXPECT_TRUE(validate_tower(t3).ok());
  EXPECT_EQ(t2.level(7).tile_count(), 2u * 16384u);
  EXPECT_EQ(t3.level(5).tile_count(), 2u * 59049u);
}

TEST(Subdivide, CapsAreEnforced) {
  EXPECT_THROW(build_tower(builtin_rule("lattes-2x2"), 3, TowerLimits{2, ~std::uint64_t{0}}), CapExceeded);
  EXPECT_THROW(build_tower(builtin_rule("lattes-2x2"), 5, TowerLimits{8, 4096}), CapExceeded);
  auto tower = build_tower(builtin_rule("lattes-2x2"), 2);
  EXPECT_THROW((void)tower.level(3), LookupError);
  EXPECT_THROW((void)tower.tiles_containing(VertexId(0), 3), LookupError);
}
