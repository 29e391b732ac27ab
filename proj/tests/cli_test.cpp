#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"
#include "thurston/cli.hpp"

using namespace thurston;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "thurston");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Json run_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

}  // namespace

TEST(Cli, ValidateBuiltin) {
  auto j = run_json({"validate", "--rule", "lattes-2x2"});
  EXPECT_TRUE(j["result"]["valid"].get<bool>());
  EXPECT_FALSE(j["result"]["criticality"]["has_periodic_critical"].get<bool>());
  EXPECT_EQ(j["tool"], "thurston");
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["version"], kToolVersion);
  EXPECT_EQ(j["config"]["rule"], "lattes-2x2");
}

TEST(Cli, DnTable) {
  auto j = run_json({"dn", "--rule", "lattes-2x2", "--depth", "4"});
  std::vector<std::uint64_t> dn;
  for (const auto& row : j["result"]["rows"]) {
    dn.push_back(row["D_n"].get<std::uint64_t>());
    EXPECT_TRUE(row["witness_valid"].get<bool>());
    EXPECT_EQ(row["witness"].size(), dn.back());
  }
  EXPECT_EQ(dn, (std::vector<std::uint64_t>{1, 2, 4, 8, 16}));
}

TEST(Cli, CurvatureReport) {
  auto j = run_json({"curvature", "--rule", "lattes-2x2", "--depth", "4"});
  const auto& r = j["result"];
  EXPECT_NEAR(r["ku_lower_bound"].get<double>(), -std::log(2.0) * std::log(2.0), 1e-12);
  for (const auto& c : r["lattes"]["c"]) EXPECT_DOUBLE_EQ(c["c_n"].get<double>(), 1.0);
  EXPECT_EQ(r["lattes"]["verdict"], "consistent");
  EXPECT_TRUE(r["acu_bounded"].get<bool>());
  EXPECT_TRUE(r["control_increasing"].get<bool>());
  EXPECT_EQ(j["config"]["seed"], 1);
}

TEST(Cli, OutputIsDeterministic) {
  for (const auto& cmd : {"curvature", "graph"}) {
    auto a = run({cmd, "--depth", "4", "--seed", "11"});
    auto b = run({cmd, "--depth", "4", "--seed", "11"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out) << cmd;
  }
  auto c = run({"graph", "--depth", "4", "--seed", "12"});
  EXPECT_NE(c.out, run({"graph", "--depth", "4", "--seed", "11"}).out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"subdivide", "--rule", rules_dir() + "/triangle-barycentric.json"}).code, 1);
  EXPECT_EQ(run({"validate", "--rule", rules_dir() + "/triangle-barycentric.json"}).code, 1);
  EXPECT_EQ(run({"subdivide", "--depth", "9"}).code, 2);
  EXPECT_EQ(run({"subdivide", "--depth", "5", "--max-bytes", "1000"}).code, 2);
  EXPECT_EQ(run({"lambda0", "--depth", "1"}).code, 4);
  EXPECT_EQ(run({"dn", "--rule", "no-such-rule"}).code, 4);
  EXPECT_EQ(run({"dn", "--format", "xml"}).code, 4);
  EXPECT_EQ(run({}).code, 4);
  EXPECT_EQ(run({"--help"}).code, 0);

  const std::string bad = testing::TempDir() + "bad_rule.json";
  std::ofstream(bad) << "{\"name\": \"x\", \"m\": 2}";
  auto r = run({"dn", "--rule", bad});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("schema"), std::string::npos);
}

TEST(Cli, RuleFixturesMatchBuiltins) {
  for (const auto& name : builtin_rule_names()) {
    const std::string text = read_text(rules_dir() + "/" + name + ".json");
    EXPECT_EQ(text, serialize_rule(builtin_rule(name))) << name;
    EXPECT_EQ(serialize_rule(parse_rule(text)), text);
    EXPECT_EQ(run({"export", "--kind", "rule", "--rule", name}).out, text);
  }
}

TEST(Cli, ExportArtifacts) {
  auto dot = run({"export", "--kind", "dot", "--depth", "2"});
  EXPECT_EQ(dot.code, 0);
  EXPECT_NE(dot.out.find("\"L-1:T0\" -- \"L0:T0\";"), std::string::npos);

  auto edges = run({"export", "--kind", "edges", "--depth", "2"});
  auto graph = run_json({"graph", "--depth", "2"});
  const auto lines = std::count(edges.out.begin(), edges.out.end(), '\n');
  EXPECT_EQ(lines - 1, graph["result"]["edges"].get<std::int64_t>());
  EXPECT_EQ(edges.out.substr(0, 14), "source,target\n");

  auto dn = run({"export", "--kind", "dn", "--depth", "3"});
  EXPECT_EQ(dn.out, "n,D_n,root,ratio,c_n\n0,1,,,1\n1,2,2,2,1\n2,4,2,2,1\n3,8,2,2,1\n");

  auto lattes = run({"lattes", "--depth", "3", "--format", "csv"});
  EXPECT_EQ(lattes.out.substr(lattes.out.find('\n') + 1), "n,c_n\n0,1\n1,1\n2,1\n3,1\n");
  EXPECT_EQ(run({"validate", "--format", "csv"}).code, 4);
}

TEST(Cli, VisualPairs) {
  auto j = run_json({"visual", "--depth", "4", "--pair", "0,1", "--pair", "0,2", "--pair", "2,2"});
  const auto& p = j["result"]["pairs"];
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0]["m"], 2);
  EXPECT_EQ(p[0]["m_prime"], 1);
  EXPECT_EQ(p[1]["m"], 1);
  EXPECT_EQ(p[2]["m"], "inf");
  EXPECT_EQ(p[2]["m_prime"], "undefined");
  EXPECT_EQ(run({"visual", "--pair", "0;1"}).code, 4);
  EXPECT_EQ(run({"visual", "--pair", "0,99999"}).code, 4);
  EXPECT_EQ(run({"visual", "--lambda", "1"}).code, 4);
}
