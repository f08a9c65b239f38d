#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lvlab/grid.hpp"

namespace lvlab {

namespace {

const char* kModule = "grid2d";

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorKind::Parse, kModule, msg); }

Vec2 read_xy(const nlohmann::json& j, const std::string& what) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("x") && j.contains("y") && j["x"].is_number() && j["y"].is_number())
    return {j["x"].get<double>(), j["y"].get<double>()};
  parse_error(what + " must be a point [x, y] or {x, y}");
}

}  // namespace

std::string grid_to_json(const Grid& g) {
  nlohmann::ordered_json j;
  j["ambient_area"] = g.ambient_area();
  j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : g.vertices()) j["vertices"].push_back({{"x", v.position.x}, {"y", v.position.y}});
  j["arcs"] = nlohmann::ordered_json::array();
  for (const auto& a : g.arcs()) {
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : a.points) pts.push_back({p.x, p.y});
    j["arcs"].push_back({{"v0", a.v0}, {"v1", a.v1}, {"points", pts}});
  }
  j["faces"] = g.faces();
  j["marked_points"] = nlohmann::ordered_json::array();
  for (const auto& p : g.marked_points()) j["marked_points"].push_back({p.x, p.y});
  j["periodic"] = g.periodic();
  return j.dump() + "\n";
}

Grid grid_from_json(const std::string& text, const Tolerances& tol) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error("grid document must be an object");
  for (const char* key : {"ambient_area", "vertices", "arcs", "faces", "marked_points"})
    if (!j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  if (!j["ambient_area"].is_number()) parse_error("ambient_area must be a number");
  if (!j["vertices"].is_array() || !j["arcs"].is_array() || !j["faces"].is_array() || !j["marked_points"].is_array())
    parse_error("vertices, arcs, faces and marked_points must be arrays");
  std::vector<Vec2> verts;
  for (const auto& v : j["vertices"]) verts.push_back(read_xy(v, "vertex"));
  std::vector<Arc> arcs;
  for (const auto& a : j["arcs"]) {
    if (!a.is_object() || !a.contains("v0") || !a.contains("v1") || !a.contains("points") ||
        !a["v0"].is_number_integer() || !a["v1"].is_number_integer() || !a["points"].is_array())
      parse_error("each arc needs integer v0, v1 and a points array");
    Arc arc;
    arc.v0 = a["v0"].get<int>();
    arc.v1 = a["v1"].get<int>();
    for (const auto& p : a["points"]) arc.points.push_back(read_xy(p, "arc sample"));
    arcs.push_back(std::move(arc));
  }
  std::vector<std::vector<int>> faces;
  for (const auto& f : j["faces"]) {
    if (!f.is_array()) parse_error("each face must be an array of arc ids");
    std::vector<int> ids;
    for (const auto& id : f) {
      if (!id.is_number_integer()) parse_error("arc ids must be integers");
      ids.push_back(id.get<int>());
    }
    faces.push_back(ids);
  }
  std::vector<Vec2> marked;
  for (const auto& p : j["marked_points"]) marked.push_back(read_xy(p, "marked point"));
  bool periodic = false;
  if (j.contains("periodic")) {
    if (!j["periodic"].is_boolean()) parse_error("periodic must be a boolean");
    periodic = j["periodic"].get<bool>();
  }
  return Grid::build(j["ambient_area"].get<double>(), verts, arcs, faces, marked, periodic, tol);
}

Grid load_grid(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, kModule, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return grid_from_json(ss.str(), tol);
}

void save_grid(const Grid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, kModule, "cannot write '" + path + "'");
  out << grid_to_json(g);
  if (!out) throw Error(ErrorKind::Io, kModule, "write failed for '" + path + "'");
}

}  // namespace lvlab
