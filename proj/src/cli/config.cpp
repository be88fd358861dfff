#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hgf/error.hpp"

namespace hgf::cli {

namespace {

void reject_unknown(const Json& j, const std::string& where, const std::vector<std::string>& allowed) {
  if (!j.is_object()) throw ConstraintError("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConstraintError("config: unknown key '" + key + "' in " + where);
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConstraintError("config: " + where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConstraintError("config: " + where + " must be finite");
  return v;
}

std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ConstraintError("config: " + where + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

Densities triple(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConstraintError("config: " + where + " must be [u, v, w]");
  return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

std::vector<double> array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConstraintError("config: " + where + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(number(e, where));
  return out;
}

}  // namespace

Params params_from_json(const Json& j) {
  static const std::vector<std::string> names{"a1", "a2", "a3", "a4", "a5", "d1", "d2", "d3"};
  reject_unknown(j, "params", names);
  for (const auto& n : names)
    if (!j.contains(n)) throw ConstraintError("config: params." + n + " is missing (all eight coefficients required)");
  Params p;
  p.a1 = number(j["a1"], "params.a1");
  p.a2 = number(j["a2"], "params.a2");
  p.a3 = number(j["a3"], "params.a3");
  p.a4 = number(j["a4"], "params.a4");
  p.a5 = number(j["a5"], "params.a5");
  p.d1 = number(j["d1"], "params.d1");
  p.d2 = number(j["d2"], "params.d2");
  p.d3 = number(j["d3"], "params.d3");
  p.validate();
  return p;
}

Json params_to_json(const Params& p) {
  return Json{{"a1", p.a1}, {"a2", p.a2}, {"a3", p.a3}, {"a4", p.a4},
              {"a5", p.a5}, {"d1", p.d1}, {"d2", p.d2}, {"d3", p.d3}};
}

SpaceGrid grid_from_json(const Json& j) {
  reject_unknown(j, "grid", {"x_min", "x_max", "n", "h"});
  if (!j.contains("x_min") || !j.contains("x_max")) throw ConstraintError("config: grid needs x_min and x_max");
  if (j.contains("n") == j.contains("h")) throw ConstraintError("config: grid needs exactly one of n or h");
  const double a = number(j["x_min"], "grid.x_min"), b = number(j["x_max"], "grid.x_max");
  SpaceGrid g;
  if (j.contains("n")) {
    g = SpaceGrid{a, b, count(j["n"], "grid.n")};
  } else {
    g = SpaceGrid::with_spacing(a, b, number(j["h"], "grid.h"));
  }
  g.validate();
  return g;
}

Json grid_to_json(const SpaceGrid& g) { return Json{{"x_min", g.x_min}, {"x_max", g.x_max}, {"n", g.n}, {"h", g.h()}}; }

RunConfigFile parse_config(const Json& doc) {
  reject_unknown(doc, "the top level", {"params", "family", "grid", "time", "bc", "seed", "initial"});
  RunConfigFile c;
  if (doc.contains("params")) c.params = params_from_json(doc["params"]);
  if (doc.contains("family")) {
    const Json& f = doc["family"];
    if (!f.is_object() || !f.contains("key") || !f["key"].is_string())
      throw ConstraintError("config: family needs a string 'key'");
    FamilyChoice choice;
    choice.key = f["key"].get<std::string>();
    // family_parameter_names throws for unknown families.
    const auto& names = family_parameter_names(choice.key);
    for (const auto& [key, value] : f.items()) {
      if (key == "key") continue;
      if (key == "enforce_nonnegativity") {
        if (!value.is_boolean()) throw ConstraintError("config: family.enforce_nonnegativity must be a boolean");
        choice.enforce_nonnegativity = value.get<bool>();
        continue;
      }
      if (std::find(names.begin(), names.end(), key) == names.end())
        throw ConstraintError("config: unknown key '" + key + "' in family " + choice.key);
      choice.values[key] = number(value, "family." + key);
    }
    c.family = choice;
  }
  if (doc.contains("grid")) c.grid = grid_from_json(doc["grid"]);
  if (doc.contains("time")) {
    const Json& t = doc["time"];
    reject_unknown(t, "time", {"t0", "t_end", "cfl_safety", "snapshot_every"});
    if (t.contains("t0")) c.time.t0 = number(t["t0"], "time.t0");
    if (t.contains("t_end")) c.time.t_end = number(t["t_end"], "time.t_end");
    if (t.contains("cfl_safety")) c.time.cfl_safety = number(t["cfl_safety"], "time.cfl_safety");
    if (t.contains("snapshot_every")) c.time.snapshot_every = count(t["snapshot_every"], "time.snapshot_every");
  }
  if (doc.contains("bc")) {
    const Json& b = doc["bc"];
    reject_unknown(b, "bc", {"kind", "left", "right"});
    if (!b.contains("kind") || !b["kind"].is_string()) throw ConstraintError("config: bc needs a string 'kind'");
    BcConfig bc;
    bc.kind = b["kind"].get<std::string>();
    if (bc.kind != "dirichlet" && bc.kind != "neumann-zero" && bc.kind != "pinned-to-exact")
      throw ConstraintError("config: bc.kind must be dirichlet, neumann-zero or pinned-to-exact");
    if (b.contains("left")) bc.left = triple(b["left"], "bc.left");
    if (b.contains("right")) bc.right = triple(b["right"], "bc.right");
    if (bc.kind != "dirichlet" && (bc.left || bc.right))
      throw ConstraintError("config: bc.left/bc.right only apply to dirichlet");
    if (bc.left.has_value() != bc.right.has_value())
      throw ConstraintError("config: dirichlet needs both bc.left and bc.right, or neither");
    c.bc = bc;
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConstraintError("config: seed must be a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("initial")) {
    const Json& i = doc["initial"];
    reject_unknown(i, "initial", {"u", "v", "w"});
    if (!i.contains("u") || !i.contains("v") || !i.contains("w"))
      throw ConstraintError("config: initial needs arrays u, v and w");
    c.initial = std::array<std::vector<double>, 3>{array(i["u"], "initial.u"), array(i["v"], "initial.v"),
                                                   array(i["w"], "initial.w")};
  }
  return c;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstraintError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConstraintError("'" + path + "' is not valid JSON: " + e.what());
  }
}

RunConfigFile load_config(const std::string& path) { return parse_config(read_json_file(path)); }

}  // namespace hgf::cli
