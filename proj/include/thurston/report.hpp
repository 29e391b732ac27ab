#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "thurston/expansion.hpp"
#include "thurston/rule_io.hpp"
#include "thurston/visual_metric.hpp"

namespace thurston {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

namespace report {

inline Json node_list(const TileGraph& g, const std::vector<std::uint32_t>& ids) {
  Json a = Json::array();
  for (auto id : ids) a.push_back(g.node(id).label());
  return a;
}

inline Json tiles_at_level(int n, const std::vector<TileId>& ts) {
  Json a = Json::array();
  for (TileId t : ts) a.push_back(TileNode{n, t}.label());
  return a;
}

inline Json stats(const Tower& tower) {
  Json rows = Json::array();
  for (int n = 0; n <= tower.depth(); ++n) {
    const CellComplex& c = tower.level(n);
    const auto V = static_cast<std::int64_t>(c.vertex_count()), E = static_cast<std::int64_t>(c.edge_count()),
               F = static_cast<std::int64_t>(c.tile_count());
    rows.push_back({{"level", n}, {"vertices", V}, {"edges", E}, {"tiles", F}, {"euler", V - E + F},
                    {"valid", validate_complex(c, tower.degree()).ok()}});
  }
  return rows;
}

inline Json criticality(const CriticalityReport& c) {
  Json crit = Json::array();
  for (VertexId v : c.critical)
    crit.push_back({{"vertex", v.value}, {"local_degree", c.local_degree[v.index()]}});
  Json j{{"critical", crit}, {"periodic_critical", c.periodic_critical},
         {"has_periodic_critical", c.has_periodic_critical}};
  j["degree_bound"] = c.degree_bound ? Json(*c.degree_bound) : Json(nullptr);
  return j;
}

inline Json dn(const DnResult& r, bool valid) {
  return {{"n", r.n}, {"D_n", r.value}, {"zero_edges", r.zero_edges}, {"witness_valid", valid},
          {"witness", tiles_at_level(r.n, r.witness)}};
}

inline Json lambda0(const std::vector<Lambda0Row>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back({{"n", r.n}, {"D_n", r.dn}, {"root", r.root}, {"ratio", r.ratio}});
  return a;
}

inline Json lattes(const LattesResult& r) {
  Json c = Json::array();
  for (std::size_t n = 0; n < r.c.size(); ++n) c.push_back({{"n", n}, {"c_n", r.c[n]}});
  return {{"threshold", r.threshold}, {"heuristic", true}, {"verdict", r.verdict()}, {"c", c}};
}

inline Json acu(const AcuResult& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"level", row.level}, {"defect", row.defect}, {"chains", row.chains}, {"worst_kind", row.worst_kind}});
  return {{"kappa", r.kappa}, {"overall", r.overall}, {"rows", rows}};
}

inline Json defect(const DefectResult& r) {
  return {{"delta", r.value.value()},
          {"exhaustive", r.exhaustive},
          {"samples", r.samples},
          {"seed", r.seed},
          {"witness", {r.witness[0].label(), r.witness[1].label(), r.witness[2].label()}}};
}

inline Json sandwich(const SandwichResult& r) {
  return {{"pairs", r.pairs},
          {"lower_defect", r.lower_defect.value()},
          {"lower_violations", r.lower_violations},
          {"C_prime", r.upper_defect.value()},
          {"lower_witness", {r.lower_witness.first.label(), r.lower_witness.second.label()}},
          {"upper_witness", {r.upper_witness.first.label(), r.upper_witness.second.label()}}};
}

inline Json curvature(const CurvatureReport& r) {
  return {{"degree", r.degree},
          {"ku_lower_bound", r.ku_lower_bound},
          {"kappa", r.kappa},
          {"lambda0", lambda0(r.lambda0)},
          {"lattes", lattes(r.lattes)},
          {"acu", acu(r.acu)},
          {"acu_bounded", r.acu_bounded},
          {"acu_control_4kappa", acu(r.acu_control)},
          {"control_increasing", r.control_increasing},
          {"chain_seed", r.chain_seed},
          {"sampled_chains", r.sampled_chains},
          {"verdict", r.verdict}};
}

inline Json profile(const CharvisualProfile& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows) {
    Json row{{"level", r.level}, {"tiles", r.tiles}, {"inconclusive", r.inconclusive}};
    const bool any = r.inconclusive < r.tiles;
    row["min"] = any ? Json(r.min) : Json(nullptr);
    row["max"] = any ? Json(r.max) : Json(nullptr);
    rows.push_back(row);
  }
  return {{"lambda", p.lambda}, {"band", p.band}, {"rows", rows}};
}

inline Json point(const PointRef& p) { return {{"level", p.level}, {"vertex", p.vertex.value}}; }

inline Json level_value(const PointLevel& v) {
  if (v.finite()) return v.value;
  return v.str();
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
  }
  return v.dump();
}

inline bool is_table(const Json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v)
    if (!e.is_object()) return false;
  return true;
}

inline void csv_table(std::ostream& out, const Json& rows) {
  bool first = true;
  for (const auto& [k, v] : rows.front().items()) {
    out << (first ? "" : ",") << k;
    first = false;
  }
  out << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& [k, v] : row.items()) {
      std::string cell = v.is_array() ? "" : scalar(v);
      if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) cell += (i ? " " : "") + scalar(v[i]);
      }
      if (cell.find_first_of(",\"") != std::string::npos) {
        std::string q = "\"";
        for (char ch : cell) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        cell = q + "\"";
      }
      out << (first ? "" : ",") << cell;
      first = false;
    }
    out << "\n";
  }
}

inline void text(std::ostream& out, const Json& j, const std::string& indent = "") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      out << indent << k << ":\n";
      text(out, v, indent + "  ");
    } else if (is_table(v)) {
      out << indent << k << ":\n";
      std::vector<std::string> cols;
      for (const auto& [c, _] : v.front().items()) cols.push_back(c);
      std::vector<std::size_t> width(cols.size());
      std::vector<std::vector<std::string>> cells;
      for (const auto& row : v) {
        std::vector<std::string> line;
        for (const auto& c : cols) {
          const Json& x = row.contains(c) ? row.at(c) : Json(nullptr);
          if (x.is_array()) {
            std::string s;
            for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " " : "") + scalar(x[i]);
            line.push_back(s);
          } else {
            line.push_back(scalar(x));
          }
        }
        cells.push_back(std::move(line));
      }
      for (std::size_t i = 0; i < cols.size(); ++i) {
        width[i] = cols[i].size();
        for (const auto& line : cells) width[i] = std::max(width[i], line[i].size());
      }
      auto emit = [&](const std::vector<std::string>& line) {
        out << indent << "  ";
        for (std::size_t i = 0; i < line.size(); ++i) {
          out << line[i];
          if (i + 1 < line.size()) out << std::string(width[i] - line[i].size() + 2, ' ');
        }
        out << "\n";
      };
      emit(cols);
      for (const auto& line : cells) emit(line);
    } else if (v.is_array()) {
      out << indent << k << ":";
      for (const auto& e : v) out << " " << scalar(e);
      out << "\n";
    } else {
      out << indent << k << ": " << scalar(v) << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Graph export

inline void dot(std::ostream& out, const TileGraph& g) {
  out << "graph tiles {\n";
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    const TileNode x = g.node(i);
    out << "  \"" << x.label() << "\" [level=" << x.level << "];\n";
  }
  for (std::uint32_t i = 0; i < g.node_count(); ++i)
    for (std::uint32_t j : g.neighbors(i))
      if (i < j) out << "  \"" << g.node(i).label() << "\" -- \"" << g.node(j).label() << "\";\n";
  out << "}\n";
}

inline void edge_list(std::ostream& out, const TileGraph& g) {
  out << "source,target\n";
  for (std::uint32_t i = 0; i < g.node_count(); ++i)
    for (std::uint32_t j : g.neighbors(i))
      if (i < j) out << g.node(i).label() << "," << g.node(j).label() << "\n";
}

/// Columns n, D_n, root, ratio, c_n; root and ratio are empty at n = 0.
inline void dn_csv(std::ostream& out, const Tower& tower) {
  out << "n,D_n,root,ratio,c_n\n";
  const double d = static_cast<double>(tower.degree());
  std::uint64_t prev = 0;
  for (int n = 0; n <= tower.depth(); ++n) {
    const std::uint64_t v = join_sides_dn(tower, n).value;
    out << n << "," << v << ",";
    if (n > 0)
      out << scalar(std::pow(static_cast<double>(v), 1.0 / n)) << ","
          << scalar(static_cast<double>(v) / static_cast<double>(prev));
    else
      out << ",";
    out << "," << scalar(static_cast<double>(v) / std::pow(d, n / 2.0)) << "\n";
    prev = v;
  }
}

}  // namespace report
}  // namespace thurston
