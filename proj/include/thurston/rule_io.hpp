#pragma once

// Rule documents: JSON, UTF-8.
//
//   { "name", "m", "degree",
//     "vertices": [{ "id", "image_vertex", "location" }],
//     "edges":    [{ "id", "endpoints": [v, w], "tiles": [t, u],
//                    "image_edge", "image_direction", "location" }],
//     "tiles":    [{ "id", "region", "color", "rotation",
//                    "boundary": [{ "edge", "direction" }] }],
//     "zero_vertices": [m vertex ids], "post_vertex_map": [m indices] }
//
// location is {"on_curve": {"edge_index", "position_num", "position_den"}}
// or {"interior": "white" | "black"}. Directions are "forward" or "reverse".
// A tile boundary is its positive cycle; "rotation" is the index in that
// cycle of the edge leaving the corner that maps to p_0.
//
// Ids may be any distinct non-negative integers; they are renumbered densely
// in increasing order, which is the normalized form serialize_rule writes.

#include <algorithm>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "thurston/rule.hpp"

namespace thurston {

using OrderedJson = nlohmann::ordered_json;

namespace detail {

inline const OrderedJson& field(const OrderedJson& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key))
    throw SchemaError("missing field '" + std::string(key) + "' in " + std::string(where));
  return obj.at(key);
}

template <class T>
T get_as(const OrderedJson& obj, const char* key, std::string_view where) {
  const OrderedJson& v = field(obj, key, where);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError("field '" + std::string(key) + "' in " + std::string(where) + " has the wrong type");
  }
}

inline bool direction_from_string(const std::string& s) {
  if (s == "forward") return true;
  if (s == "reverse") return false;
  throw SchemaError("unknown direction '" + s + "'");
}

inline const char* direction_string(bool fwd) { return fwd ? "forward" : "reverse"; }

class IdMap {
 public:
  IdMap(const OrderedJson& arr, const char* kind) : kind_(kind) {
    if (!arr.is_array()) throw SchemaError(std::string(kind) + " list is not an array");
    std::vector<std::uint64_t> ids;
    for (const auto& item : arr) ids.push_back(get_as<std::uint64_t>(item, "id", kind));
    std::vector<std::uint64_t> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw SchemaError(std::string("duplicate ") + kind + " id");
    for (std::size_t i = 0; i < sorted.size(); ++i) dense_[sorted[i]] = static_cast<std::uint32_t>(i);
    for (auto id : ids) order_.push_back(dense_.at(id));
  }

  std::uint32_t resolve(std::uint64_t id, std::string_view from) const {
    auto it = dense_.find(id);
    if (it == dense_.end())
      throw SchemaError("dangling id: " + std::string(from) + " references missing " + kind_ + " " +
                        std::to_string(id));
    return it->second;
  }
  /// Dense index of the i-th document entry.
  std::uint32_t at_position(std::size_t i) const { return order_[i]; }
  std::size_t size() const { return order_.size(); }

 private:
  std::string kind_;
  std::map<std::uint64_t, std::uint32_t> dense_;
  std::vector<std::uint32_t> order_;
};

inline Location parse_location(const OrderedJson& j, std::string_view where) {
  if (!j.is_object()) throw SchemaError("location in " + std::string(where) + " is not an object");
  if (j.contains("on_curve")) {
    const auto& oc = j.at("on_curve");
    auto den = get_as<std::uint64_t>(oc, "position_den", where);
    if (den == 0) throw SchemaError("zero position_den in " + std::string(where));
    return Location::on_curve(get_as<std::uint32_t>(oc, "edge_index", where),
                              get_as<std::uint64_t>(oc, "position_num", where), den);
  }
  if (j.contains("interior")) return Location::interior(color_from_string(get_as<std::string>(j, "interior", where)));
  throw SchemaError("location in " + std::string(where) + " is neither on_curve nor interior");
}

inline OrderedJson location_json(const Location& l) {
  OrderedJson j = OrderedJson::object();
  if (l.is_on_curve()) {
    OrderedJson oc = OrderedJson::object();
    oc["edge_index"] = l.zero_edge;
    oc["position_num"] = l.num;
    oc["position_den"] = l.den;
    j["on_curve"] = oc;
  } else {
    j["interior"] = std::string(to_string(l.region));
  }
  return j;
}

/// Orders each 0-edge's curve edges by position and orients them from p_k.
inline void rebuild_curve_chains(CellComplex& c) {
  const auto m = static_cast<std::uint32_t>(c.m);
  c.curve_chain.assign(m, {});
  std::vector<std::vector<std::pair<std::uint64_t, EdgeId>>> per(m);
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const Location& l = c.edges[e].location;
    if (l.is_on_curve() && l.zero_edge < m) per[l.zero_edge].push_back({l.num, EdgeId(static_cast<std::uint32_t>(e))});
  }
  for (std::uint32_t k = 0; k < m && k < c.zero_vertices.size(); ++k) {
    std::sort(per[k].begin(), per[k].end(), [](auto& a, auto& b) { return a.first < b.first; });
    VertexId at = c.zero_vertices[k];
    for (auto& [num, e] : per[k]) {
      const EdgeRecord& er = c.edges[e.index()];
      bool fwd = er.ends[0] == at;
      c.curve_chain[k].push_back({e, fwd});
      at = fwd ? er.ends[1] : er.ends[0];
    }
  }
}

}  // namespace detail

/// Parses a rule document. Throws SchemaError on schema violations, dangling
/// ids, non-sphere topology, m < 3 or degree < 2. Other invariant violations
/// are reported by validate_rule.
inline SubdivisionRule parse_rule_json(const OrderedJson& doc) {
  using namespace detail;
  SubdivisionRule rule;
  rule.name = doc.contains("name") ? get_as<std::string>(doc, "name", "rule") : std::string("unnamed");
  const int m = get_as<int>(doc, "m", "rule");
  const auto d = get_as<std::int64_t>(doc, "degree", "rule");
  if (m < 3) throw SchemaError("m = " + std::to_string(m) + " < 3");
  if (m > 64) throw SchemaError("m = " + std::to_string(m) + " > 64 is not supported");
  if (d < 2) throw SchemaError("degree = " + std::to_string(d) + " < 2");
  rule.m = m;
  rule.degree = static_cast<std::uint64_t>(d);

  const auto& vj = field(doc, "vertices", "rule");
  const auto& ej = field(doc, "edges", "rule");
  const auto& tj = field(doc, "tiles", "rule");
  IdMap vids(vj, "vertex"), eids(ej, "edge"), tids(tj, "tile");

  CellComplex& c = rule.one_skeleton;
  c.level = 1;
  c.m = m;
  const std::size_t V = vids.size(), E = eids.size(), F = tids.size();

  c.vertex_location.resize(V);
  c.vertex_image.resize(V);
  c.vertex_created.assign(V, 1);
  for (std::size_t i = 0; i < V; ++i) {
    const auto& item = vj[i];
    const auto v = vids.at_position(i);
    const std::string where = "vertex " + std::to_string(item.at("id").get<std::uint64_t>());
    c.vertex_location[v] = parse_location(field(item, "location", where), where);
    c.vertex_image[v] = get_as<std::uint32_t>(item, "image_vertex", where);
    if (c.vertex_image[v] >= static_cast<std::uint32_t>(m))
      throw SchemaError(where + " image_vertex out of range");
  }

  c.edges.resize(E);
  for (std::size_t i = 0; i < E; ++i) {
    const auto& item = ej[i];
    const auto e = eids.at_position(i);
    const std::string where = "edge " + std::to_string(item.at("id").get<std::uint64_t>());
    EdgeRecord& er = c.edges[e];
    auto ends = get_as<std::vector<std::uint64_t>>(item, "endpoints", where);
    auto tiles = get_as<std::vector<std::uint64_t>>(item, "tiles", where);
    if (ends.size() != 2) throw SchemaError(where + " must have two endpoints");
    if (tiles.size() != 2) throw SchemaError(where + " must have two tiles");
    for (int s = 0; s < 2; ++s) {
      er.ends[s] = VertexId(vids.resolve(ends[s], where));
      er.tiles[s] = TileId(tids.resolve(tiles[s], where));
    }
    er.image_edge = get_as<std::uint32_t>(item, "image_edge", where);
    if (er.image_edge >= static_cast<std::uint32_t>(m)) throw SchemaError(where + " image_edge out of range");
    er.image_forward = direction_from_string(get_as<std::string>(item, "image_direction", where));
    er.location = parse_location(field(item, "location", where), where);
  }

  std::vector<std::vector<SubdivisionRule::BoundaryStep>> bounds(F);
  c.tile_color.resize(F);
  c.tile_region.resize(F);
  c.tile_parent.resize(F);
  rule.rotation.resize(F);
  for (std::size_t i = 0; i < F; ++i) {
    const auto& item = tj[i];
    const auto t = tids.at_position(i);
    const std::string where = "tile " + std::to_string(item.at("id").get<std::uint64_t>());
    c.tile_color[t] = color_from_string(get_as<std::string>(item, "color", where));
    c.tile_region[t] = color_from_string(get_as<std::string>(item, "region", where));
    c.tile_parent[t] = TileId(c.tile_region[t] == Color::white ? 0u : 1u);
    rule.rotation[t] = get_as<std::uint32_t>(item, "rotation", where);
    const auto& bj = field(item, "boundary", where);
    if (!bj.is_array() || bj.empty()) throw SchemaError(where + " boundary must be a non-empty array");
    for (const auto& step : bj)
      bounds[t].push_back({EdgeId(eids.resolve(get_as<std::uint64_t>(step, "edge", where), where)),
                           direction_from_string(get_as<std::string>(step, "direction", where))});
  }

  // Label order from the positive cycle, the rotation and the color.
  for (std::size_t t = 0; t < F; ++t) {
    const auto& b = bounds[t];
    const std::size_t len = b.size();
    const std::size_t r = rule.rotation[t] % len;
    auto start = [&](std::size_t pos) {
      const EdgeRecord& er = c.edges[b[pos].edge.index()];
      return b[pos].forward ? er.ends[0] : er.ends[1];
    };
    std::vector<EdgeId> es(len);
    std::vector<VertexId> vs(len);
    for (std::size_t i = 0; i < len; ++i) {
      if (c.tile_color[t] == Color::white) {
        es[i] = b[(r + i) % len].edge;
        vs[i] = start((r + i) % len);
      } else {
        es[i] = b[(r + len - 1 - i) % len].edge;
        vs[i] = start((r + len - i) % len);
      }
    }
    c.tile_edges.push_row(std::span<const EdgeId>(es));
    c.tile_corners.push_row(std::span<const VertexId>(vs));
    rule.positive_boundary.push_row(std::span<const SubdivisionRule::BoundaryStep>(b));
  }

  auto zv = get_as<std::vector<std::uint64_t>>(doc, "zero_vertices", "rule");
  if (zv.size() != static_cast<std::size_t>(m)) throw SchemaError("zero_vertices must list m vertices");
  for (auto id : zv) {
    VertexId v(vids.resolve(id, "zero_vertices"));
    c.zero_vertices.push_back(v);
    c.vertex_created[v.index()] = 0;
  }
  rule.post_vertex_map = get_as<std::vector<std::uint32_t>>(doc, "post_vertex_map", "rule");
  if (rule.post_vertex_map.size() != static_cast<std::size_t>(m))
    throw SchemaError("post_vertex_map must have m entries");

  const long long euler = static_cast<long long>(V) - static_cast<long long>(E) + static_cast<long long>(F);
  if (euler != 2) throw SchemaError("non-sphere topology: V - E + F = " + std::to_string(euler));

  rebuild_curve_chains(c);
  c.finalize();
  return rule;
}

inline SubdivisionRule parse_rule(std::string_view text) {
  OrderedJson doc;
  try {
    doc = OrderedJson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("rule document is not valid JSON: ") + e.what());
  }
  return parse_rule_json(doc);
}

/// The normalized document for a rule.
inline OrderedJson rule_to_json(const SubdivisionRule& rule) {
  using namespace detail;
  const CellComplex& c = rule.one_skeleton;
  OrderedJson doc = OrderedJson::object();
  doc["name"] = rule.name;
  doc["m"] = rule.m;
  doc["degree"] = rule.degree;

  OrderedJson vs = OrderedJson::array();
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    OrderedJson j = OrderedJson::object();
    j["id"] = v;
    j["image_vertex"] = c.vertex_image[v];
    j["location"] = location_json(c.vertex_location[v]);
    vs.push_back(std::move(j));
  }
  doc["vertices"] = std::move(vs);

  OrderedJson es = OrderedJson::array();
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const EdgeRecord& er = c.edges[e];
    OrderedJson j = OrderedJson::object();
    j["id"] = e;
    j["endpoints"] = {er.ends[0].value, er.ends[1].value};
    j["tiles"] = {er.tiles[0].value, er.tiles[1].value};
    j["image_edge"] = er.image_edge;
    j["image_direction"] = direction_string(er.image_forward);
    j["location"] = location_json(er.location);
    es.push_back(std::move(j));
  }
  doc["edges"] = std::move(es);

  OrderedJson ts = OrderedJson::array();
  for (std::size_t t = 0; t < c.tile_count(); ++t) {
    OrderedJson j = OrderedJson::object();
    j["id"] = t;
    j["region"] = std::string(to_string(c.tile_region[t]));
    j["color"] = std::string(to_string(c.tile_color[t]));
    j["rotation"] = rule.rotation[t];
    OrderedJson b = OrderedJson::array();
    for (const auto& step : rule.positive_boundary.row(t)) {
      OrderedJson s = OrderedJson::object();
      s["edge"] = step.edge.value;
      s["direction"] = direction_string(step.forward);
      b.push_back(std::move(s));
    }
    j["boundary"] = std::move(b);
    ts.push_back(std::move(j));
  }
  doc["tiles"] = std::move(ts);

  OrderedJson zv = OrderedJson::array();
  for (VertexId v : c.zero_vertices) zv.push_back(v.value);
  doc["zero_vertices"] = std::move(zv);
  doc["post_vertex_map"] = rule.post_vertex_map;
  return doc;
}

inline std::string serialize_rule(const SubdivisionRule& rule) { return rule_to_json(rule).dump(2) + "\n"; }

}  // namespace thurston
