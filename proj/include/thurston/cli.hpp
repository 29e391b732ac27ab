#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thurston/builtin_rules.hpp"
#include "thurston/report.hpp"

namespace thurston {

struct RunConfig {
  std::string command;
  std::string rule = "lattes-2x2";
  int depth = 4;
  std::uint64_t seed = 1;
  std::uint64_t triples = 100000;  // K_t
  std::uint64_t pairs = 100000;    // K_p
  std::uint64_t chains = 10000;    // K_c
  std::optional<double> kappa;
  std::optional<double> lambda;
  double threshold = 0.9;
  std::string format = "text";
  int max_depth = 8;
  std::uint64_t max_bytes = std::uint64_t{4} << 30;
  // visual
  std::vector<std::string> pairs_spec;
  int min_level = 0;
  int max_level = -1;
  // export
  std::string kind = "dot";
  std::string output;
};

inline Json to_json(const RunConfig& c) {
  Json j{{"command", c.command}, {"rule", c.rule},           {"depth", c.depth},       {"seed", c.seed},
         {"triples", c.triples}, {"pairs", c.pairs},         {"chains", c.chains},     {"threshold", c.threshold},
         {"format", c.format},   {"max_depth", c.max_depth}, {"max_bytes", c.max_bytes}};
  j["kappa"] = c.kappa ? Json(*c.kappa) : Json(nullptr);
  j["lambda"] = c.lambda ? Json(*c.lambda) : Json(nullptr);
  if (c.command == "visual") {
    j["pair"] = c.pairs_spec;
    j["min_level"] = c.min_level;
    j["max_level"] = c.max_level;
  }
  if (c.command == "export") j["kind"] = c.kind;
  return j;
}

namespace cli_detail {

/// Sub-seeds for the independent samplers, all derived from the one seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline SubdivisionRule load_rule(const std::string& source) {
  for (const auto& name : builtin_rule_names())
    if (name == source) return builtin_rule(source);
  std::ifstream in(source, std::ios::binary);
  if (!in) throw LookupError("no built-in rule or readable file named '" + source + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rule(ss.str());
}

inline Tower build(const RunConfig& cfg, SubdivisionRule rule, std::ostream& err) {
  if (cfg.depth < 0) throw LookupError("depth must be >= 0");
  TowerLimits limits{cfg.max_depth, cfg.max_bytes};
  Tower probe(rule, TowerLimits{0, ~std::uint64_t{0}});
  err << "estimated memory: " << (probe.estimated_bytes(cfg.depth) >> 20) << " MiB for depth " << cfg.depth << "\n";
  Tower tower = build_tower(std::move(rule), cfg.depth, limits);
  for (const auto& s : tower.stats())
    err << "level " << s.level << ": " << s.tiles << " tiles in " << s.build_seconds << " s\n";
  return tower;
}

inline PointRef parse_vertex(const PointMetric& pm, const std::string& s) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw LookupError("bad vertex id '" + s + "'");
  return pm.point(VertexId(static_cast<std::uint32_t>(v)));
}

inline std::pair<PointRef, PointRef> parse_pair(const PointMetric& pm, const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw LookupError("pair '" + spec + "' is not of the form a,b");
  return {parse_vertex(pm, spec.substr(0, comma)), parse_vertex(pm, spec.substr(comma + 1))};
}

/// The table a command writes under --format csv.
inline const Json& csv_rows(const std::string& command, const Json& result) {
  static const Json empty = Json::array();
  if (command == "subdivide") return result.at("levels");
  if (command == "dn") return result.at("rows");
  if (command == "lambda0") return result.at("rows");
  if (command == "lattes") return result.at("c");
  if (command == "graph") return result.at("acu").at("rows");
  if (command == "curvature") return result.at("lambda0");
  if (command == "visual") return result.at("pairs");
  return empty;
}

inline Json run(const RunConfig& cfg, std::ostream& err, int& exit_code) {
  Json result;
  SubdivisionRule rule = load_rule(cfg.rule);
  result["rule"] = {{"name", rule.name}, {"m", rule.m}, {"degree", rule.degree}};

  if (cfg.command == "validate") {
    const ValidationReport v = validate_rule(rule);
    const CriticalityReport c = periodic_critical_check(rule);
    result["valid"] = v.ok();
    result["violations"] = v.violations;
    result["criticality"] = report::criticality(c);
    if (!v.ok())
      exit_code = 3;
    else if (c.has_periodic_critical)
      exit_code = 1;
    return result;
  }

  Tower tower = build(cfg, std::move(rule), err);
  const double kappa = cfg.kappa.value_or(quarter_log_squared(tower.degree()));
  ChainSampler chains;
  chains.count = cfg.chains;
  chains.seed = derive_seed(cfg.seed, 2);

  if (cfg.command == "subdivide") {
    result["levels"] = report::stats(tower);
    result["tower_valid"] = validate_tower(tower).ok();
  } else if (cfg.command == "graph") {
    TileGraph g(tower);
    DistanceTable dist(g);
    TouchIndex touch(g);
    const bool small = tower.depth() <= 3;
    const auto ts = small ? TripleSampler::all() : TripleSampler::random(cfg.triples, derive_seed(cfg.seed, 0));
    const auto ps = small ? PairSampler::all() : PairSampler::random(cfg.pairs, derive_seed(cfg.seed, 1));
    std::uint64_t edges = 0;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) edges += g.neighbors(i).size();
    result["nodes"] = g.node_count();
    result["edges"] = edges / 2;
    result["hyperbolicity"] = report::defect(hyperbolicity_defect(g, dist, ts));
    result["sandwich"] = report::sandwich(sandwich_constants(g, dist, touch, ps));
    auto all = dn_witness_chains(g);
    auto sampled = sample_chains(g, dist, chains);
    all.insert(all.end(), sampled.begin(), sampled.end());
    result["acu"] = report::acu(acu_defect(dist, kappa, all));
    result["chain_seed"] = chains.seed;
  } else if (cfg.command == "dn") {
    Json rows = Json::array();
    for (int n = 0; n <= tower.depth(); ++n) {
      auto r = join_sides_dn(tower, n);
      rows.push_back(report::dn(r, check_dn(tower, r).ok()));
    }
    result["rows"] = rows;
  } else if (cfg.command == "lambda0") {
    result["rows"] = report::lambda0(lambda0_estimate(tower));
  } else if (cfg.command == "lattes") {
    result["lattes"] = report::lattes(lattes_criterion(tower, cfg.threshold));
    result["c"] = result["lattes"]["c"];
  } else if (cfg.command == "curvature") {
    result.update(report::curvature(curvature_report(tower, chains, cfg.threshold, cfg.kappa)));
  } else if (cfg.command == "visual") {
    PointMetric pm(tower);
    Json rows = Json::array();
    for (const auto& spec : cfg.pairs_spec) {
      const auto [x, y] = parse_pair(pm, spec);
      const PointLevel m = pm.m(x, y);
      Json row{{"x", x.vertex.value}, {"y", y.vertex.value}, {"x_level", x.level}, {"y_level", y.level},
               {"m", report::level_value(m)}};
      row["m_prime"] = x == y ? Json("undefined") : report::level_value(pm.m_prime(x, y));
      const RayProducts rp = ray_products(x, y, tower);
      Json prods = Json::array();
      for (const auto& p : rp.products) prods.push_back(p.str());
      row["ray_products"] = prods;
      row["gap"] = rp.gap ? Json(*rp.gap) : Json(nullptr);
      rows.push_back(row);
    }
    result["pairs"] = rows;
    if (tower.depth() >= 2) {
      const double lambda = cfg.lambda.value_or(std::sqrt(static_cast<double>(tower.degree())));
      const int hi = cfg.max_level < 0 ? tower.depth() : cfg.max_level;
      if (cfg.min_level < 0 || hi > tower.depth() || cfg.min_level > hi) throw LookupError("bad profile level range");
      result["profile"] = report::profile(charvisual_profile(tower, lambda, cfg.min_level, hi));
    }
  } else {
    throw LookupError("unknown command " + cfg.command);
  }
  return result;
}

inline int write_export(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream body;
  if (cfg.kind == "rule") {
    body << serialize_rule(load_rule(cfg.rule));
  } else {
    Tower tower = build(cfg, load_rule(cfg.rule), err);
    if (cfg.kind == "dot" || cfg.kind == "edges") {
      TileGraph g(tower);
      if (cfg.kind == "dot")
        report::dot(body, g);
      else
        report::edge_list(body, g);
    } else if (cfg.kind == "dn") {
      report::dn_csv(body, tower);
    } else if (cfg.kind == "profile") {
      const double lambda = cfg.lambda.value_or(std::sqrt(static_cast<double>(tower.degree())));
      report::csv_table(body, report::profile(charvisual_profile(tower, lambda)).at("rows"));
    } else {
      throw LookupError("unknown export kind " + cfg.kind);
    }
  }
  if (cfg.output.empty()) {
    out << body.str();
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw LookupError("cannot write " + cfg.output);
    f << body.str();
  }
  return 0;
}

}  // namespace cli_detail

/// Exit codes: 0 ok, 1 rule gate (periodic critical points), 2 cap
/// exceeded, 3 schema error, 4 usage or lookup error.
inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Expanding Thurston maps from finite subdivision rules.", "thurston"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  struct Spec {
    const char* name;
    const char* help;
  };
  const std::vector<Spec> commands{
      {"validate", "Validate a rule and check for periodic critical points."},
      {"subdivide", "Build the tower and print per-level cell counts."},
      {"graph", "Hyperbolicity defect, sandwich constants and AC_u defect of the tile graph."},
      {"dn", "D_n table with witness chains."},
      {"lambda0", "Table of D_n, D_n^(1/n) and D_n/D_(n-1)."},
      {"lattes", "c_n = D_n / deg^(n/2) and the heuristic verdict."},
      {"curvature", "Full curvature report."},
      {"visual", "m, m' and ray products for vertex pairs, plus the tile diameter profile."},
      {"export", "Write DOT, CSV or rule artifacts."},
  };
  std::optional<double> kappa, lambda;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->callback([&cfg, name = std::string(c.name)] { cfg.command = name; });
    sub->add_option("--rule", cfg.rule, "Built-in rule name (lattes-2x2, lattes-3x3) or path to a rule file")
        ->capture_default_str();
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    if (std::string(c.name) == "validate") continue;
    sub->add_option("--depth", cfg.depth, "Deepest level to build")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed for every sampler (sub-seeds are derived from it)")
        ->capture_default_str();
    sub->add_option("--triples", cfg.triples, "Sampled triples K_t (depth > 3)")->capture_default_str();
    sub->add_option("--pairs", cfg.pairs, "Sampled pairs K_p (depth > 3)")->capture_default_str();
    sub->add_option("--chains", cfg.chains, "Sampled chains K_c")->capture_default_str();
    sub->add_option("--kappa", kappa, "Curvature override (default -1/4 log^2 deg)");
    sub->add_option("--lambda", lambda, "Visual parameter override (default sqrt(deg))");
    sub->add_option("--threshold", cfg.threshold, "Per-level decay factor for the Lattes verdict")
        ->capture_default_str();
    sub->add_option("--max-depth", cfg.max_depth, "Depth cap")->capture_default_str();
    sub->add_option("--max-bytes", cfg.max_bytes, "Memory cap in bytes")->capture_default_str();
    if (std::string(c.name) == "visual") {
      sub->add_option("--pair", cfg.pairs_spec, "Vertex pair a,b (repeatable)");
      sub->add_option("--min-level", cfg.min_level, "First profile level")->capture_default_str();
      sub->add_option("--max-level", cfg.max_level, "Last profile level (default: depth)");
    }
    if (std::string(c.name) == "export") {
      sub->add_option("--kind", cfg.kind, "Artifact")
          ->check(CLI::IsMember({"dot", "edges", "dn", "profile", "rule"}))
          ->capture_default_str();
      sub->add_option("--output", cfg.output, "File to write instead of standard output");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 4;
  }
  cfg.kappa = kappa;
  cfg.lambda = lambda;

  try {
    if (cfg.command == "export") return cli_detail::write_export(cfg, out, err);
    int exit_code = 0;
    Json result = cli_detail::run(cfg, err, exit_code);
    Json doc{{"tool", "thurston"},
             {"version", kToolVersion},
             {"schema_version", kSchemaVersion},
             {"config", to_json(cfg)},
             {"result", result}};
    if (cfg.format == "json") {
      out << doc.dump(2) << "\n";
    } else if (cfg.format == "csv") {
      const Json& rows = cli_detail::csv_rows(cfg.command, result);
      if (rows.empty()) throw LookupError("no CSV table for " + cfg.command);
      out << "# thurston " << kToolVersion << " schema " << kSchemaVersion << " " << to_json(cfg).dump() << "\n";
      report::csv_table(out, rows);
    } else {
      report::text(out, doc);
    }
    if (exit_code == 1) err << "rule has periodic critical points\n";
    if (exit_code == 3) err << "rule is invalid\n";
    return exit_code;
  } catch (const GateError& e) {
    err << "gate: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    err << "schema: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace thurston
