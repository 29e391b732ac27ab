#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "thurston/rule_io.hpp"

namespace thurston {

/// Document for the k x k pillow rule: two unit squares glued along their
/// boundary C (m = 4), each cut into k x k subsquares colored like a
/// checkerboard, every subsquare folded onto a face by reflections (d = k^2).
///
/// 0-vertices p_0..p_3 are the corners (0,0), (1,0), (1,1), (0,1); the front
/// face is the white 0-tile. Grid points are in units of 1/k.
inline OrderedJson lattes_document(int k) {
  if (k < 2) throw LookupError("pillow rule needs k >= 2");
  using Point = std::pair<int, int>;

  auto on_boundary = [k](int x, int y) { return x == 0 || y == 0 || x == k || y == k; };

  // Boundary points walked along the curve: e_j runs from p_j to p_{j+1}.
  std::array<std::vector<Point>, 4> side;
  for (int x = 0; x <= k; ++x) side[0].push_back({x, 0});
  for (int y = 0; y <= k; ++y) side[1].push_back({k, y});
  for (int x = k; x >= 0; --x) side[2].push_back({x, k});
  for (int y = k; y >= 0; --y) side[3].push_back({0, y});

  std::map<Point, int> boundary_id;
  std::vector<std::pair<Point, Location>> boundary_vertices;
  const std::array<Point, 4> corner{{{0, 0}, {k, 0}, {k, k}, {0, k}}};
  for (std::uint32_t j = 0; j < 4; ++j) {
    boundary_id[corner[j]] = static_cast<int>(j);
    boundary_vertices.push_back({corner[j], Location::on_curve(j, 0, static_cast<std::uint64_t>(k))});
  }
  for (std::uint32_t j = 0; j < 4; ++j)
    for (int i = 1; i < k; ++i) {
      boundary_id[side[j][i]] = static_cast<int>(boundary_vertices.size());
      boundary_vertices.push_back(
          {side[j][i], Location::on_curve(j, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k))});
    }
  const int n_boundary = static_cast<int>(boundary_vertices.size());
  const int n_interior = (k - 1) * (k - 1);

  auto vid = [&](int face, int x, int y) {
    if (on_boundary(x, y)) return boundary_id.at({x, y});
    return n_boundary + face * n_interior + (y - 1) * (k - 1) + (x - 1);
  };
  auto image = [](int x, int y) {
    const int u = x % 2, v = y % 2;
    return u == 0 ? (v == 0 ? 0 : 3) : (v == 0 ? 1 : 2);
  };

  OrderedJson doc = OrderedJson::object();
  doc["name"] = "lattes-" + std::to_string(k) + "x" + std::to_string(k);
  doc["m"] = 4;
  doc["degree"] = k * k;

  OrderedJson vertices = OrderedJson::array();
  auto add_vertex = [&](int id, int x, int y, const Location& loc) {
    OrderedJson v = OrderedJson::object();
    v["id"] = id;
    v["image_vertex"] = image(x, y);
    v["location"] = detail::location_json(loc);
    vertices.push_back(std::move(v));
  };
  for (int i = 0; i < n_boundary; ++i) {
    auto [p, loc] = boundary_vertices[i];
    add_vertex(i, p.first, p.second, loc);
  }
  for (int face = 0; face < 2; ++face)
    for (int y = 1; y < k; ++y)
      for (int x = 1; x < k; ++x)
        add_vertex(vid(face, x, y), x, y, Location::interior(face == 0 ? Color::white : Color::black));
  doc["vertices"] = std::move(vertices);

  struct EdgeDraft {
    int a, b;
    std::pair<int, int> pa, pb;
    Location loc;
    std::vector<int> tiles;
  };
  std::vector<EdgeDraft> edges;
  std::map<std::pair<int, int>, int> edge_index;
  auto add_edge = [&](int face, Point pa, Point pb, const Location& loc) {
    int a = vid(face, pa.first, pa.second), b = vid(face, pb.first, pb.second);
    edge_index[{std::min(a, b), std::max(a, b)}] = static_cast<int>(edges.size());
    edges.push_back({a, b, pa, pb, loc, {}});
  };
  for (std::uint32_t j = 0; j < 4; ++j)
    for (int i = 0; i < k; ++i)
      add_edge(0, side[j][i], side[j][i + 1],
               Location::on_curve(j, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k)));
  for (int face = 0; face < 2; ++face) {
    const Location inside = Location::interior(face == 0 ? Color::white : Color::black);
    for (int y = 1; y < k; ++y)
      for (int x = 0; x < k; ++x) add_edge(face, {x, y}, {x + 1, y}, inside);
    for (int x = 1; x < k; ++x)
      for (int y = 0; y < k; ++y) add_edge(face, {x, y}, {x, y + 1}, inside);
  }

  OrderedJson tiles = OrderedJson::array();
  int tile_id = 0;
  for (int face = 0; face < 2; ++face)
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < k; ++i, ++tile_id) {
        // Positive cycle: counterclockwise on the front, clockwise (seen
        // from the front) on the back.
        std::array<Point, 4> cyc = face == 0 ? std::array<Point, 4>{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}}
                                             : std::array<Point, 4>{{{i, j}, {i, j + 1}, {i + 1, j + 1}, {i + 1, j}}};
        OrderedJson boundary = OrderedJson::array();
        int rotation = 0;
        for (int s = 0; s < 4; ++s) {
          Point from = cyc[s], to = cyc[(s + 1) % 4];
          int a = vid(face, from.first, from.second), b = vid(face, to.first, to.second);
          int e = edge_index.at({std::min(a, b), std::max(a, b)});
          edges[e].tiles.push_back(tile_id);
          OrderedJson step = OrderedJson::object();
          step["edge"] = e;
          step["direction"] = edges[e].a == a ? "forward" : "reverse";
          boundary.push_back(std::move(step));
          if (image(from.first, from.second) == 0) rotation = s;
        }
        const bool even = (i + j) % 2 == 0;
        const Color color = (face == 0) == even ? Color::white : Color::black;
        OrderedJson t = OrderedJson::object();
        t["id"] = tile_id;
        t["region"] = face == 0 ? "white" : "black";
        t["color"] = std::string(to_string(color));
        t["rotation"] = rotation;
        t["boundary"] = std::move(boundary);
        tiles.push_back(std::move(t));
      }

  OrderedJson ej = OrderedJson::array();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    const int ia = image(ed.pa.first, ed.pa.second), ib = image(ed.pb.first, ed.pb.second);
    const bool forward = (ia + 1) % 4 == ib;
    OrderedJson j = OrderedJson::object();
    j["id"] = e;
    j["endpoints"] = {ed.a, ed.b};
    j["tiles"] = ed.tiles;
    j["image_edge"] = forward ? ia : ib;
    j["image_direction"] = forward ? "forward" : "reverse";
    j["location"] = detail::location_json(ed.loc);
    ej.push_back(std::move(j));
  }
  doc["edges"] = std::move(ej);
  doc["tiles"] = std::move(tiles);
  doc["zero_vertices"] = {0, 1, 2, 3};
  doc["post_vertex_map"] = {image(0, 0), image(k, 0), image(k, k), image(0, k)};
  return doc;
}

inline std::vector<std::string> builtin_rule_names() { return {"lattes-2x2", "lattes-3x3"}; }

inline SubdivisionRule builtin_rule(std::string_view name) {
  if (name == "lattes-2x2") return parse_rule_json(lattes_document(2));
  if (name == "lattes-3x3") return parse_rule_json(lattes_document(3));
  throw LookupError("unknown built-in rule '" + std::string(name) + "'");
}

}  // namespace thurston
