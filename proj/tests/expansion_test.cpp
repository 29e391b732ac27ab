#include <gtest/gtest.h>

#include <chrono>

#include "dn_oracle.hpp"
#include "test_support.hpp"
#include "thurston/builtin_rules.hpp"
#include "thurston/expansion.hpp"

using namespace thurston;

TEST(Expansion, DZeroIsOne) {
  for (const auto& name : builtin_rule_names()) {
    auto tower = build_tower(builtin_rule(name), 0);
    EXPECT_EQ(join_sides_dn(tower, 0).value, 1u);
  }
  auto tri = build_tower(fixture("triangle-midpoint"), 0);
  EXPECT_EQ(join_sides_dn(tri, 0).value, 1u);
}

TEST(Expansion, BfsMatchesExhaustiveOnPillows) {
  for (const auto& name : builtin_rule_names()) {
    auto tower = build_tower(builtin_rule(name), 2);
    for (int n = 0; n <= 2; ++n) {
      auto r = join_sides_dn(tower, n);
      EXPECT_TRUE(check_dn(tower, r).ok()) << name << " n=" << n;
      auto ex = oracle::exhaustive_dn(tower, n, r.value);
      ASSERT_TRUE(ex.has_value()) << name << " n=" << n;
      EXPECT_EQ(*ex, r.value) << name << " n=" << n;
    }
  }
}

TEST(Expansion, SteinerMatchesExhaustiveOnTriangle) {
  auto tower = build_tower(fixture("triangle-midpoint"), 3);
  for (int n = 0; n <= 3; ++n) {
    auto r = join_sides_dn(tower, n);
    EXPECT_TRUE(check_dn(tower, r).ok()) << "n=" << n;
    auto ex = oracle::exhaustive_dn(tower, n, r.value);
    ASSERT_TRUE(ex.has_value());
    EXPECT_EQ(*ex, r.value) << "n=" << n;
  }
}

TEST(Expansion, PillowDnPowers) {
  auto t2 = build_tower(builtin_rule("lattes-2x2"), 5);
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(join_sides_dn(t2, n).value, 1u << n);
  auto t3 = build_tower(builtin_rule("lattes-3x3"), 3);
  std::uint64_t p = 1;
  for (int n = 0; n <= 3; ++n, p *= 3) EXPECT_EQ(join_sides_dn(t3, n).value, p);
}

TEST(Expansion, WitnessCheckerCatchesBrokenWitness) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 2);
  auto r = join_sides_dn(tower, 2);
  auto broken = r;
  broken.witness.pop_back();
  EXPECT_TRUE(check_dn(tower, broken).mentions("cardinality violation"));
  broken.value = broken.witness.size();
  EXPECT_TRUE(check_dn(tower, broken).mentions("side violation"));
  auto split = r;
  std::swap(split.witness[1], split.witness.back());
  split.witness[1] = split.witness[0];
  EXPECT_FALSE(check_dn(tower, split).ok());
}

TEST(Expansion, Lambda0Table) {
  auto tower = build_tower(builtin_rule("lattes-2x2"), 5);
  auto rows = lambda0_estimate(tower);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    EXPECT_DOUBLE_EQ(row.root, 2.0);
    EXPECT_DOUBLE_EQ(row.ratio, 2.0);
  }
  auto t3 = build_tower(builtin_rule("lattes-3x3"), 3);
  for (const auto& row : lambda0_estimate(t3)) EXPECT_NEAR(row.root, 3.0, 1e-12);
  EXPECT_THROW(lambda0_estimate(build_tower(builtin_rule("lattes-2x2"), 1)), LookupError);
}

TEST(Expansion, LattesCriterionOnPillows) {
  for (const auto& name : builtin_rule_names()) {
    auto tower = build_tower(builtin_rule(name), name == "lattes-2x2" ? 5 : 3);
    auto r = lattes_criterion(tower);
    EXPECT_EQ(r.verdict(), "consistent");
    for (double c : r.c) EXPECT_DOUBLE_EQ(c, 1.0);
  }
}

TEST(Expansion, LattesVerdictLogic) {
  EXPECT_EQ(lattes_verdict({1.0, 0.8, 0.6, 0.5}, 0.9).verdict(), "violated(3)");
  EXPECT_EQ(lattes_verdict({1.0, 0.8, 0.6, 0.58}, 0.9).verdict(), "consistent");
  EXPECT_EQ(lattes_verdict({1.0, 1.0, 1.0}, 0.9).verdict(), "consistent");
  EXPECT_EQ(lattes_verdict({1.0, 0.5}, 0.9).verdict(), "violated(1)");
}

TEST(Expansion, CurvatureBound) {
  EXPECT_NEAR(quarter_log_squared(4), -std::log(2.0) * std::log(2.0), 1e-15);
  EXPECT_NEAR(quarter_log_squared(4), -0.4805, 1e-4);
  EXPECT_NEAR(quarter_log_squared(9), -std::log(3.0) * std::log(3.0), 1e-15);
}

TEST(Expansion, AcuShapeChecks) {
  auto rows = [](std::vector<double> v) {
    AcuResult r;
    for (std::size_t i = 0; i < v.size(); ++i) r.rows.push_back({static_cast<int>(i + 1), v[i], 1, "walk"});
    return r;
  };
  EXPECT_TRUE(acu_bounded(rows({0, 0, 0, 0})));
  EXPECT_TRUE(acu_bounded(rows({0, 0.5, 0.4, 0.4})));
  EXPECT_FALSE(acu_bounded(rows({0, 0.1, 0.2, 0.3})));
  EXPECT_TRUE(acu_strictly_increasing(rows({0, 0.1, 0.2})));
  EXPECT_FALSE(acu_strictly_increasing(rows({0, 0.1, 0.1})));
  EXPECT_FALSE(acu_strictly_increasing(rows({0})));
}

TEST(Expansion, CurvatureReportOnPillows) {
  ChainSampler cs;
  cs.count = 2000;
  cs.seed = 5;
  auto r = curvature_report(build_tower(builtin_rule("lattes-2x2"), 4), cs);
  EXPECT_DOUBLE_EQ(r.kappa, r.ku_lower_bound);
  EXPECT_EQ(r.lattes.verdict(), "consistent");
  EXPECT_EQ(r.acu.rows.size(), 4u);
  EXPECT_TRUE(r.acu_bounded);
  EXPECT_TRUE(r.control_increasing);
  EXPECT_EQ(r.sampled_chains, 2000u);
  // A chain of one step has defect exactly 0.
  TileGraph g(build_tower(builtin_rule("lattes-2x2"), 2));
  DistanceTable dist(g);
  EXPECT_DOUBLE_EQ(chain_defect(dist, Chain{{3, 9}, "walk"}, r.kappa), 0.0);

  auto r3 = curvature_report(build_tower(builtin_rule("lattes-3x3"), 2), cs);
  EXPECT_NEAR(r3.kappa, -std::log(3.0) * std::log(3.0), 1e-15);
  EXPECT_THROW(curvature_report(build_tower(builtin_rule("lattes-2x2"), 2), cs, 0.9, 0.5), LookupError);
  EXPECT_THROW(curvature_report(build_tower(builtin_rule("lattes-2x2"), 1), cs), LookupError);
}
