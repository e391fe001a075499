#include "s2s/scene_io.hpp"

#include <fstream>

namespace s2s {
namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (const auto& [key, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw ConfigError(std::string("unknown key \"") + key + "\" in " +
                        where);
  }
}

double num(const json& j, const char* where) {
  if (!j.is_number())
    throw ConfigError(std::string(where) + " must be a number");
  return j.get<double>();
}

Complex point(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(std::string(where) + " must be a [x, y] pair");
  return {num(j[0], where), num(j[1], where)};
}

Opening parse_omega(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number_integer() ||
        !j[1].is_number_integer())
      throw ConfigError("omega as a rational must be an integer pair [p, q]");
    long p = j[0].get<long>(), q = j[1].get<long>();
    if (p <= 0 || q <= 0) throw ConfigError("omega = pi p/q needs p, q > 0");
    Opening om = Opening::from_rational(p, q);
    if (om.value >= 2 * pi) throw ConfigError("omega must be below 2 pi");
    return om;
  }
  double v = num(j, "omega");
  if (v <= 0 || v >= 2 * pi)
    throw ConfigError("omega must lie in (0, 2 pi)");
  return Opening::from_value(v);
}

HoleSpec parse_hole(const json& j, int index) {
  std::string where = "holes[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError(where + " needs a \"kind\"");
  HoleSpec h;
  std::string kind = j["kind"].get<std::string>();
  if (kind == "disk") {
    require_keys(j, {"kind", "center", "radius"}, where.c_str());
    if (!j.contains("center") || !j.contains("radius"))
      throw ConfigError(where + " disk needs center and radius");
    h.kind = HoleSpec::Kind::Disk;
    h.center = point(j["center"], where.c_str());
    h.radius = num(j["radius"], where.c_str());
    if (h.radius <= 0) throw ConfigError(where + " radius must be positive");
  } else if (kind == "polygon") {
    require_keys(j, {"kind", "vertices"}, where.c_str());
    if (!j.contains("vertices") || !j["vertices"].is_array() ||
        j["vertices"].size() < 3)
      throw ConfigError(where + " polygon needs >= 3 vertices");
    h.kind = HoleSpec::Kind::Polygon;
    for (const auto& v : j["vertices"])
      h.vertices.push_back(point(v, where.c_str()));
  } else {
    throw ConfigError(where + ": unknown hole kind \"" + kind + "\"");
  }
  return h;
}

AnalyticRHS parse_rhs(const json& j) {
  require_keys(j, {"constant", "poly"}, "f");
  if (j.contains("constant") == j.contains("poly"))
    throw ConfigError("f needs exactly one of \"constant\" or \"poly\"");
  if (j.contains("constant"))
    return AnalyticRHS::constant(num(j["constant"], "f.constant"));
  std::map<std::pair<int, int>, double> c;
  for (const auto& term : j["poly"]) {
    if (!term.is_array() || term.size() != 3)
      throw ConfigError("f.poly entries are [a, b, coeff] monomials");
    int a = term[0].get<int>(), b = term[1].get<int>();
    if (a < 0 || b < 0) throw ConfigError("f.poly powers must be >= 0");
    c[{a, b}] += num(term[2], "f.poly coeff");
  }
  return AnalyticRHS::from_real_poly(c);
}

}  // namespace

SceneFile parse_scene_file(const json& j) {
  if (!j.is_object()) throw ConfigError("scene file must be a JSON object");
  require_keys(j, {"scene", "params"}, "the top level");
  if (!j.contains("scene") || !j["scene"].is_object())
    throw ConfigError("scene file needs a \"scene\" object");
  const json& s = j["scene"];
  require_keys(s, {"omega", "outer_radius", "rho0", "rho0p", "holes", "f"},
               "scene");
  if (!s.contains("omega")) throw ConfigError("scene needs omega");

  SceneFile out;
  out.scene.omega = parse_omega(s["omega"]);
  if (s.contains("outer_radius"))
    out.scene.outer_radius = num(s["outer_radius"], "outer_radius");
  if (s.contains("rho0")) out.scene.rho0 = num(s["rho0"], "rho0");
  if (s.contains("rho0p")) out.scene.rho0p = num(s["rho0p"], "rho0p");
  if (out.scene.outer_radius <= 0 || out.scene.rho0 <= 0 ||
      out.scene.rho0p <= 0)
    throw ConfigError("radii must be positive");
  if (out.scene.rho0 > out.scene.outer_radius ||
      out.scene.rho0p >= out.scene.rho0)
    throw ConfigError("radii must satisfy rho0p < rho0 <= outer_radius");
  if (s.contains("holes")) {
    if (!s["holes"].is_array()) throw ConfigError("holes must be an array");
    int i = 0;
    for (const auto& h : s["holes"]) out.scene.holes.push_back(parse_hole(h, i++));
  }
  if (s.contains("f")) out.f = parse_rhs(s["f"]);
  if (j.contains("params")) {
    if (!j["params"].is_object())
      throw ConfigError("params must be an object");
    out.params = j["params"];
  }
  return out;
}

SceneFile load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return parse_scene_file(j);
}

nlohmann::json scene_to_json(const SectorScene& s) {
  json holes = json::array();
  for (const HoleSpec& h : s.holes) {
    if (h.kind == HoleSpec::Kind::Disk) {
      holes.push_back({{"kind", "disk"},
                       {"center", {h.center.real(), h.center.imag()}},
                       {"radius", h.radius}});
    } else {
      json verts = json::array();
      for (Complex v : h.vertices) verts.push_back({v.real(), v.imag()});
      holes.push_back({{"kind", "polygon"}, {"vertices", verts}});
    }
  }
  json omega;
  if (s.omega.rational_pi)
    omega = {s.omega.rational_pi->first, s.omega.rational_pi->second};
  else
    omega = s.omega.value;
  return {{"omega", omega},
          {"outer_radius", s.outer_radius},
          {"rho0", s.rho0},
          {"rho0p", s.rho0p},
          {"holes", holes}};
}

}  // namespace s2s
