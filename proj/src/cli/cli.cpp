#include "cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/family.hpp"
#include "cli/report.hpp"
#include "hgf/error.hpp"
#include "hgf/reduction.hpp"
#include "hgf/simulator.hpp"
#include "hgf/symmetry.hpp"

namespace hgf::cli {

namespace {

namespace fs = std::filesystem;

const char* const kFamilyFlagNames[] = {"a1", "a3", "a4", "delta", "d3", "d", "beta", "gamma", "delta1", "delta2", "p0", "dp0"};

struct FamilyFlags {
  std::string key;
  std::map<std::string, double> values;
  bool allow_negative = false;
};

void add_family_flags(CLI::App* sub, FamilyFlags& f) {
  sub->add_option("--family", f.key, "Family key (see catalog)");
  for (const char* name : kFamilyFlagNames) {
    const std::string n = name;
    sub->add_option_function<double>(
        "--" + n, [&f, n](const double& v) { f.values[n] = v; }, "Family parameter " + n);
  }
  sub->add_flag("--allow-negative", f.allow_negative, "fam40-i: skip the nonnegativity restrictions");
}

std::string describe(double v) { return format_double(v); }

/// Config values first, flags on top; a flag that changes a config value is
/// reported as a warning.
FamilyChoice resolve_family(const FamilyFlags& flags, const RunConfigFile* cfg, std::vector<std::string>& warnings) {
  FamilyChoice c;
  if (cfg && cfg->family) c = *cfg->family;
  if (!flags.key.empty()) {
    if (!c.key.empty() && c.key != flags.key) {
      warnings.push_back("flag --family " + flags.key + " overrides config family " + c.key);
      c.values.clear();
    }
    c.key = flags.key;
  }
  if (c.key.empty()) throw ConstraintError("no family given (use --family or a config 'family' section)");
  for (const auto& [name, value] : flags.values) {
    const auto it = c.values.find(name);
    if (it != c.values.end() && it->second != value)
      warnings.push_back("flag --" + name + " = " + describe(value) + " overrides config value " + describe(it->second));
    c.values[name] = value;
  }
  if (flags.allow_negative) c.enforce_nonnegativity = false;
  check_family_parameters(c);
  return c;
}

Json family_json(const FamilyChoice& c) {
  Json values = Json::object();
  for (const auto& [k, v] : c.values) values[k] = num(v);
  Json j{{"key", c.key}, {"values", values}};
  if (c.key == "fam40-i") j["enforce_nonnegativity"] = c.enforce_nonnegativity;
  return j;
}

Json instance_json(const FamilyInstance& inst) {
  Json coeffs = Json::object();
  for (const auto& [k, v] : inst.coefficients) coeffs[k] = num(v);
  Json endpoints = Json::array();
  for (const auto& e : inst.endpoints) endpoints.push_back(Json{{"where", e.where}, {"state", densities_json(e.state)}});
  return Json{{"key", std::string(inst.key())},
              {"params", params_to_json(inst.params)},
              {"defined", Json::array({inst.defined[0], inst.defined[1], inst.defined[2]})},
              {"speed", inst.speed ? num(*inst.speed) : Json(nullptr)},
              {"coefficients", coeffs},
              {"endpoints", endpoints}};
}

/// Default verification window of a family.
Window default_window(const std::string& key) {
  if (key == "tf63") return {-30.0, 30.0, 1.0};
  if (key.rfind("fam40-", 0) == 0) return {0.0, 10.0, 1.0};
  return {-20.0, 20.0, 1.0};
}

std::optional<RunConfigFile> maybe_config(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_config(path);
}

std::vector<double> refinement_levels(double h) { return {4.0 * h, 2.0 * h, h}; }

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

Component parse_component(const std::string& s) {
  if (s == "u") return Component::u;
  if (s == "v") return Component::v;
  if (s == "w") return Component::w;
  throw ConstraintError("component must be u, v or w");
}

// ---------------------------------------------------------------- catalog

int cmd_catalog(std::ostream& out) {
  Report r;
  r.command = "catalog";
  Json families = Json::array();
  for (FamilyKind k : all_family_kinds()) {
    const std::string key(family_key(k));
    families.push_back(Json{{"key", key},
                            {"parameters", family_parameter_names(key)},
                            {"constraints", family_constraints(key)}});
  }
  Json cases = Json::array();
  for (int id = 0; id <= 12; ++id) {
    Json ops = Json::array();
    for (OpKind k : case_ops(id)) ops.push_back(std::string(op_name(k)));
    cases.push_back(Json{{"case", id}, {"restrictions", case_restrictions(id)}, {"operators", ops}});
  }
  Json ops = Json::array();
  for (OpKind k : all_op_kinds()) ops.push_back(std::string(op_name(k)));
  Json systems = Json::array();
  for (SystemId id : {SystemId::R35, SystemId::R38, SystemId::R47, SystemId::R58, SystemId::T2a, SystemId::T2b,
                      SystemId::T2c, SystemId::T2d, SystemId::L36, SystemId::L52})
    systems.push_back(std::string(system_name(id)));
  Json ansatze = Json::array();
  for (AnsatzId id : {AnsatzId::A34, AnsatzId::A37, AnsatzId::A44, AnsatzId::T2a, AnsatzId::T2b, AnsatzId::T2c,
                      AnsatzId::T2d, AnsatzId::PlaneWave})
    ansatze.push_back(std::string(ansatz_name(id)));
  Json heat = Json::array();
  for (auto k : {HeatProfile::Kind::constant, HeatProfile::Kind::affine, HeatProfile::Kind::exponential,
                 HeatProfile::Kind::decaying_mode})
    heat.push_back(std::string(heat_kind_name(k)));
  r.results = Json{{"families", families}, {"cases", cases},     {"operators", ops},
                   {"systems", systems},   {"ansatze", ansatze}, {"heat_profiles", heat},
                   {"boundary_conditions", Json::array({"dirichlet", "neumann-zero", "pinned-to-exact"})}};
  r.write(out);
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  FamilyFlags family;
  std::string config;
  std::optional<double> t, xmin, xmax;
  std::optional<std::size_t> n;
  std::string out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const auto cfg = maybe_config(a.config);
  const FamilyChoice choice = resolve_family(a.family, cfg ? &*cfg : nullptr, warnings);
  SpaceGrid grid{-10.0, 10.0, 201};
  if (cfg && cfg->grid) grid = *cfg->grid;
  if (a.xmin) grid.x_min = *a.xmin;
  if (a.xmax) grid.x_max = *a.xmax;
  if (a.n) grid.n = *a.n;
  grid.validate();
  const double t = a.t.value_or(cfg && cfg->time.t0 ? *cfg->time.t0 : 0.0);
  const auto [lo, hi] = omega_range(choice, grid.x_min, grid.x_max, t, t);
  const FamilyInstance inst = build_family(choice, lo, hi);
  append(warnings, inst.warnings);
  const FieldState state = sample(inst.evaluate, grid, t);
  auto emit = [&](std::ostream& os) {
    write_field_header(os);
    write_field_rows(os, state, inst.defined);
  };
  if (a.out.empty()) {
    emit(out);
  } else {
    std::ofstream f(a.out);
    if (!f) throw ConstraintError("cannot write '" + a.out + "'");
    emit(f);
  }
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return 0;
}

// ---------------------------------------------------------------- residual

struct ResidualArgs {
  FamilyFlags family;
  std::string config;
  double h = 1e-3;
  std::optional<double> dt, t, xmin, xmax;
  bool refine = false;
};

int cmd_residual(const ResidualArgs& a, std::ostream& out) {
  Report r;
  r.command = "residual";
  const auto cfg = maybe_config(a.config);
  const FamilyChoice choice = resolve_family(a.family, cfg ? &*cfg : nullptr, r.warnings);
  if (!(a.h > 0) || !std::isfinite(a.h)) throw ConstraintError("residual: h must be positive");
  const double dt = a.dt.value_or(a.h);
  if (!(dt > 0) || !std::isfinite(dt)) throw ConstraintError("residual: dt must be positive");
  Window w = default_window(choice.key);
  if (a.xmin) w.x_min = *a.xmin;
  if (a.xmax) w.x_max = *a.xmax;
  if (a.t) w.t = *a.t;
  const double reach = (a.refine ? 4.0 : 1.0) * std::max(a.h, dt);
  const auto [lo, hi] = omega_range(choice, w.x_min - reach, w.x_max + reach, w.t - reach, w.t + reach);
  const FamilyInstance inst = build_family(choice, lo, hi);
  append(r.warnings, inst.warnings);

  ResidualReport rep;
  if (a.refine) {
    rep = refinement_study(inst.params, inst.evaluate, w, refinement_levels(a.h), dt / a.h);
  } else {
    rep = pde_residual(inst.params, inst.evaluate, SpaceGrid::with_spacing(w.x_min, w.x_max, a.h), w.t, dt);
  }
  r.inputs = Json{{"family", family_json(choice)}, {"h", a.h}, {"dt", dt}, {"refine", a.refine},
                  {"window", Json{{"x_min", w.x_min}, {"x_max", w.x_max}, {"t", w.t}}}};
  r.residual = residual_json(rep, w);
  r.results = Json{{"family", instance_json(inst)}};
  if (rep.order) {
    r.results["order_target"] = 2.0;
    r.results["order_tolerance"] = 0.2;
    r.results["order_ok"] = order_within(rep, 2.0, 0.2, inst.defined);
  }
  r.write(out);
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  FamilyFlags family;
  std::string config;
  std::string out_dir;
  std::optional<double> t_end, cfl;
  std::optional<std::size_t> snapshot_every;
};

template <typename T>
T pick(const std::optional<T>& flag, const std::optional<T>& cfg, T fallback, const std::string& name,
       std::vector<std::string>& warnings) {
  if (flag) {
    if (cfg && *cfg != *flag)
      warnings.push_back("flag --" + name + " overrides config value " + describe(static_cast<double>(*cfg)));
    return *flag;
  }
  return cfg.value_or(fallback);
}

void write_snapshots(const fs::path& file, const std::vector<FieldState>& snaps) {
  std::ofstream f(file);
  if (!f) throw ConstraintError("cannot write '" + file.string() + "'");
  write_field_header(f);
  for (const auto& s : snaps) write_field_rows(f, s);
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  Report r;
  r.command = "simulate";
  const RunConfigFile cfg = load_config(a.config);
  std::optional<FamilyChoice> choice;
  if (cfg.family || !a.family.key.empty()) choice = resolve_family(a.family, &cfg, r.warnings);
  else if (!a.family.values.empty()) throw ConstraintError("family parameter flags need a family");

  SimConfig sc;
  if (!cfg.grid) throw ConstraintError("config: grid is required for simulate");
  sc.grid = *cfg.grid;
  sc.t0 = cfg.time.t0.value_or(0.0);
  sc.t_end = pick(a.t_end, cfg.time.t_end, 10.0, "t-end", r.warnings);
  sc.cfl_safety = pick(a.cfl, cfg.time.cfl_safety, 0.4, "cfl", r.warnings);
  sc.snapshot_every = pick(a.snapshot_every, cfg.time.snapshot_every, std::size_t{200}, "snapshot-every", r.warnings);

  std::optional<FamilyInstance> inst;
  if (choice) {
    const auto [lo, hi] = omega_range(*choice, sc.grid.x_min, sc.grid.x_max, sc.t0, std::max(sc.t0, sc.t_end));
    inst = build_family(*choice, lo, hi);
    append(r.warnings, inst->warnings);
  }
  if (cfg.params) {
    sc.params = *cfg.params;
    if (inst && !(inst->params == sc.params))
      r.warnings.push_back("config params differ from the coefficients the family is exact for");
  } else if (inst) {
    sc.params = inst->params;
  } else {
    throw ConstraintError("config: params or family is required for simulate");
  }

  if (cfg.initial) {
    const auto& arr = *cfg.initial;
    sc.initial = FieldState{sc.grid, sc.t0, arr[0], arr[1], arr[2]};
  } else if (inst) {
    sc.initial = inst->evaluate;
  } else {
    throw ConstraintError("config: initial arrays or a family are required for simulate");
  }

  const BcConfig bc = cfg.bc.value_or(BcConfig{"neumann-zero", std::nullopt, std::nullopt});
  Json bc_json{{"kind", bc.kind}};
  if (bc.kind == "dirichlet") {
    DirichletBc d;
    if (bc.left) {
      d = DirichletBc{*bc.left, *bc.right};
    } else {
      if (!inst || inst->endpoints.size() != 2)
        throw ConstraintError("config: dirichlet without left/right needs a front family with two endpoints");
      d = DirichletBc{inst->endpoints[0].state, inst->endpoints[1].state};
    }
    bc_json["left"] = densities_json(d.left);
    bc_json["right"] = densities_json(d.right);
    sc.bc = d;
  } else if (bc.kind == "pinned-to-exact") {
    if (!inst) throw ConstraintError("config: pinned-to-exact needs a family");
    sc.bc = PinnedToExactBc{inst->evaluate};
  } else {
    sc.bc = NeumannZeroBc{};
  }

  r.inputs = Json{{"config", a.config},
                  {"params", params_to_json(sc.params)},
                  {"grid", grid_to_json(sc.grid)},
                  {"time", Json{{"t0", sc.t0}, {"t_end", sc.t_end}, {"cfl_safety", sc.cfl_safety},
                                {"snapshot_every", sc.snapshot_every}}},
                  {"bc", bc_json},
                  {"family", choice ? family_json(*choice) : Json(nullptr)},
                  {"initial", cfg.initial ? "arrays" : "family"}};

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const fs::path csv = dir / "snapshots.csv";
  auto finish = [&](int code) {
    std::ofstream rep(dir / "report.json");
    if (!rep) throw ConstraintError("cannot write '" + (dir / "report.json").string() + "'");
    r.write(rep);
    r.write(out);
    return code;
  };
  try {
    const SimRun run_ = run(sc);
    write_snapshots(csv, run_.snapshots);
    Json times = Json::array();
    for (const auto& s : run_.snapshots) times.push_back(s.t);
    Json ranges = Json::object();
    const FieldState& last = run_.snapshots.back();
    const char* names[] = {"u", "v", "w"};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& c = last.component(k);
      const auto [mn, mx] = std::minmax_element(c.begin(), c.end());
      ranges[names[k]] = Json::array({num(*mn), num(*mx)});
    }
    r.results = Json{{"steps", run_.steps},
                     {"dt", run_.dt},
                     {"stability_bound", stability_bound(sc.params, sc.grid, sc.cfl_safety)},
                     {"rhs_evaluations", run_.rhs_evaluations},
                     {"snapshots", run_.snapshots.size()},
                     {"snapshot_times", times},
                     {"snapshot_file", csv.filename().string()},
                     {"final_range", ranges}};
    if (inst && inst->params == sc.params && !cfg.initial) {
      // Deviation from the exact solution at the final time.
      std::array<double, 3> dev{};
      for (std::size_t i = 0; i < last.grid.n; ++i) {
        const Densities e = inst->evaluate(last.t, last.grid.x(i));
        for (std::size_t k = 0; k < 3; ++k)
          if (inst->defined[k]) dev[k] = std::max(dev[k], std::abs(last.component(k)[i] - e[k]));
      }
      r.results["max_deviation_from_family"] = nums(dev);
    }
    return finish(0);
  } catch (const BlowUpError& e) {
    write_snapshots(csv, e.partial().snapshots);
    r.results = Json{{"blow_up", Json{{"step", e.step()}, {"message", e.what()}}},
                     {"snapshots", e.partial().snapshots.size()},
                     {"snapshot_file", csv.filename().string()}};
    r.warnings.push_back(e.what());
    finish(2);
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

// ---------------------------------------------------------------- speed

struct SpeedArgs {
  std::string run_path;
  std::string component = "w";
  double level = 0.5;
  std::optional<double> fit_start, fit_end;
};

int cmd_speed(const SpeedArgs& a, std::ostream& out) {
  Report r;
  r.command = "speed";
  fs::path file(a.run_path);
  if (fs::is_directory(file)) file /= "snapshots.csv";
  std::ifstream in(file);
  if (!in) throw ConstraintError("cannot open '" + file.string() + "'");
  const auto snaps = read_field_csv(in);
  const Component c = parse_component(a.component);
  for (const auto& s : snaps)
    for (double v : s.component(static_cast<std::size_t>(c)))
      if (!std::isfinite(v)) throw ConstraintError("component " + a.component + " is missing from the run");
  std::optional<std::pair<double, double>> window;
  if (a.fit_start || a.fit_end) {
    if (snaps.empty()) throw ConstraintError("run has no snapshots");
    window = std::make_pair(a.fit_start.value_or(snaps.front().t), a.fit_end.value_or(snaps.back().t));
  }
  const SpeedEstimate est = measure_front_speed(snaps, c, a.level, window);
  r.inputs = Json{{"run", file.string()}, {"component", a.component}, {"level", a.level},
                  {"fit_window", window ? Json::array({window->first, window->second}) : Json("last half")}};
  r.results = Json{{"snapshots", snaps.size()}, {"grid", snaps.empty() ? Json(nullptr) : grid_to_json(snaps[0].grid)}};
  r.speed = speed_json(est);
  if (!est.reliable) r.warnings.push_back("r^2 below 0.999: speed estimate flagged unreliable");
  r.write(out);
  return 0;
}

// ---------------------------------------------------------------- symmetry

struct CoefficientFlags {
  std::map<std::string, double> values;
};

const char* const kCoefficientNames[] = {"a1", "a2", "a3", "a4", "a5", "d1", "d2", "d3"};

void add_coefficient_flags(CLI::App* sub, CoefficientFlags& f) {
  for (const char* name : kCoefficientNames) {
    const std::string n = name;
    sub->add_option_function<double>(
        "--" + n, [&f, n](const double& v) { f.values[n] = v; }, "Coefficient " + n);
  }
}

/// A params file holds either a bare coefficient object or a run config with
/// a params section. Coefficient flags override it.
std::optional<Params> load_params(const std::string& path, const CoefficientFlags& flags,
                                  std::vector<std::string>& warnings) {
  std::optional<Json> base;
  if (!path.empty()) {
    const Json doc = read_json_file(path);
    if (doc.is_object() && doc.contains("params") && doc["params"].is_object()) {
      const RunConfigFile cfg = parse_config(doc);
      base = params_to_json(*cfg.params);
    } else {
      base = params_to_json(params_from_json(doc));
    }
  }
  if (!base && flags.values.empty()) return std::nullopt;
  Json j = base.value_or(Json::object());
  for (const auto& [k, v] : flags.values) {
    if (j.contains(k) && j[k].get<double>() != v)
      warnings.push_back("flag --" + k + " = " + describe(v) + " overrides file value " + describe(j[k].get<double>()));
    j[k] = v;
  }
  return params_from_json(j);
}

struct SymListArgs {
  std::string params;
  CoefficientFlags coeffs;
};

int cmd_symmetry_list(const SymListArgs& a, std::ostream& out) {
  Report r;
  r.command = "symmetry list";
  const auto p = load_params(a.params, a.coeffs, r.warnings);
  if (!p) throw ConstraintError("symmetry list needs --params or all eight coefficient flags");
  Json cases = Json::array();
  for (const auto& m : admissible_ops(*p)) {
    Json ops = Json::array();
    for (OpKind k : m.ops) ops.push_back(std::string(op_name(k)));
    cases.push_back(Json{{"case", m.case_id}, {"restrictions", m.restrictions}, {"operators", ops}});
  }
  Json ops = Json::array();
  for (OpKind k : admissible_kinds(*p)) ops.push_back(std::string(op_name(k)));
  r.inputs = Json{{"params", params_to_json(*p)}, {"a5_relative_tolerance", 1e-12}};
  r.results = Json{{"operators", ops}, {"cases", cases}};
  r.write(out);
  return 0;
}

struct SymVerifyArgs {
  FamilyFlags family;
  std::string config;
  std::string params;
  CoefficientFlags coeffs;
  std::string op;
  double eps = 0.3;
  double h = 1e-3;
  std::optional<double> t, xmin, xmax;
  std::size_t points = 1000;
  std::optional<std::uint64_t> seed;
  std::string heat_kind = "constant";
  double heat_c0 = 1.0, heat_c1 = 0.0, heat_a = 1.0, heat_b = 0.0, heat_mu = 1.0;
};

int cmd_symmetry_verify(const SymVerifyArgs& a, std::ostream& out) {
  Report r;
  r.command = "symmetry verify";
  const auto cfg = maybe_config(a.config);
  const auto kind = parse_op_name(a.op);
  if (!kind) throw ConstraintError("unknown operator '" + a.op + "'");
  const FamilyChoice choice = resolve_family(a.family, cfg ? &*cfg : nullptr, r.warnings);
  Window w = default_window(choice.key);
  if (a.xmin) w.x_min = *a.xmin;
  if (a.xmax) w.x_max = *a.xmax;
  if (a.t) w.t = *a.t;
  if (!(a.h > 0)) throw ConstraintError("symmetry verify: h must be positive");
  // Time and space translations move the sample points by eps.
  const double reach = 4.0 * a.h + std::abs(a.eps);
  const auto [lo, hi] = omega_range(choice, w.x_min - reach, w.x_max + reach, w.t - reach, w.t + reach);
  const FamilyInstance inst = build_family(choice, lo, hi);
  append(r.warnings, inst.warnings);

  Params p = inst.params;
  std::optional<Params> given = load_params(a.params, a.coeffs, r.warnings);
  if (!given && cfg && cfg->params) given = cfg->params;
  if (given) {
    // The Fisher embedding (u, 0, 0) solves every system with a1 = 0 and d1 = 1.
    const bool fisher_ok = inst.kind == FamilyKind::fisher && given->a1 == 0.0 && given->d1 == 1.0;
    if (!(*given == inst.params) && !fisher_ok)
      r.warnings.push_back("coefficients differ from those the base family is exact for");
    p = *given;
  }
  const auto heat_kind = parse_heat_kind(a.heat_kind);
  if (!heat_kind) throw ConstraintError("unknown heat profile '" + a.heat_kind + "'");
  HeatProfile heat;
  heat.kind = *heat_kind;
  heat.c0 = a.heat_c0;
  heat.c1 = a.heat_c1;
  heat.A = a.heat_a;
  heat.B = a.heat_b;
  heat.mu = a.heat_mu;
  const SymmetryOp op = SymmetryOp::make(*kind, p, heat);

  std::array<bool, 3> mask{true, true, true};
  if (inst.kind == FamilyKind::fisher && (*kind == OpKind::Pt || *kind == OpKind::Px)) mask = inst.defined;
  const FlowVerification v = verify_flow_maps_solutions(op, a.eps, inst.evaluate, w, refinement_levels(a.h), mask);
  const std::uint64_t seed = a.seed.value_or(cfg && cfg->seed ? *cfg->seed : 1);
  const auto pts = random_jet_points(a.points, static_cast<unsigned>(seed));
  const bool group = flow_group_check(op, a.eps, -a.eps / 3.0, pts);
  const bool passed = v.ok() && group;

  r.inputs = Json{{"op", a.op},
                  {"eps", a.eps},
                  {"family", family_json(choice)},
                  {"params", params_to_json(p)},
                  {"h_levels", refinement_levels(a.h)},
                  {"window", Json{{"x_min", w.x_min}, {"x_max", w.x_max}, {"t", w.t}}},
                  {"group_points", a.points},
                  {"seed", seed},
                  {"group_tolerance", 1e-12}};
  if (*kind == OpKind::Xinf)
    r.inputs["heat"] = Json{{"kind", a.heat_kind}, {"c0", heat.c0}, {"c1", heat.c1}, {"A", heat.A},
                            {"B", heat.B},         {"mu", heat.mu}, {"d2", op.heat().d2}};
  r.residual = residual_json(v.after, w);
  r.results = Json{{"before", residual_json(v.before, w)},
                   {"truncation_estimate", nums(v.truncation)},
                   {"contract_ok", v.contract_ok},
                   {"order_ok", v.order_ok},
                   {"group_axioms_ok", group},
                   {"passed", passed}};
  r.write(out);
  return passed ? 0 : 2;
}

// ---------------------------------------------------------------- reduce

const char* const kReduceNames[] = {"alpha", "beta", "gamma", "a1", "a3", "a4", "d", "delta1", "delta2"};

struct ReduceArgs {
  std::string system;
  std::string case_name;
  std::string params;
  std::map<std::string, double> values;
  std::vector<double> y0;
  std::optional<double> from, to;
  std::size_t samples = 0;
  std::string out;
  bool verify = false;
  double h = 1e-3;
  double xmin = 0.0, xmax = 10.0;
  double rtol = 1e-10, atol = 1e-12;
  std::optional<double> max_step;
};

struct ReduceParams {
  std::map<std::string, double> values;
  std::optional<Params> coefficients;

  double get(const std::string& k, double fallback) const {
    const auto it = values.find(k);
    return it == values.end() ? fallback : it->second;
  }
  std::optional<double> opt(const std::string& k) const {
    const auto it = values.find(k);
    return it == values.end() ? std::nullopt : std::optional<double>(it->second);
  }
  double need(const std::string& k, const std::string& sys) const {
    const auto v = opt(k);
    if (!v) throw ConstraintError(sys + " needs parameter " + k);
    return *v;
  }
};

ReduceParams load_reduce_params(const ReduceArgs& a, std::vector<std::string>& warnings) {
  ReduceParams rp;
  if (!a.params.empty()) {
    const Json doc = read_json_file(a.params);
    if (!doc.is_object()) throw ConstraintError("reduce: --params file must hold an object");
    for (const auto& [k, v] : doc.items()) {
      if (k == "params") {
        rp.coefficients = params_from_json(v);
        continue;
      }
      if (std::find(std::begin(kReduceNames), std::end(kReduceNames), k) == std::end(kReduceNames))
        throw ConstraintError("reduce: unknown key '" + k + "' in params file");
      if (!v.is_number()) throw ConstraintError("reduce: " + k + " must be a number");
      rp.values[k] = v.get<double>();
    }
  }
  for (const auto& [k, v] : a.values) {
    const auto it = rp.values.find(k);
    if (it != rp.values.end() && it->second != v)
      warnings.push_back("flag --" + k + " = " + describe(v) + " overrides file value " + describe(it->second));
    rp.values[k] = v;
  }
  return rp;
}

Fam40Spec r38_spec(const std::string& case_name, const ReduceParams& rp) {
  Fam40Spec s;
  if (case_name == "i") s.c = Fam40Case::i;
  else if (case_name == "ii") s.c = Fam40Case::ii;
  else if (case_name == "iii") s.c = Fam40Case::iii;
  else throw ConstraintError("R38 case must be i, ii or iii");
  s.a1 = rp.get("a1", s.a1);
  s.a4 = rp.opt("a4");
  if (!s.a4 && s.c != Fam40Case::iii) s.a4 = 0.5;
  s.a3 = rp.opt("a3");
  s.beta = rp.opt("beta");
  s.delta1 = rp.get("delta1", s.delta1);
  s.delta2 = rp.get("delta2", s.delta2);
  return s;
}

SemiExactSpec semi_spec_for(const std::string& sys, const std::string& case_name, const ReduceParams& rp) {
  SemiExactSpec s;
  if (sys == "L36") {
    if (case_name == "i") s.c = SemiCase::s35_i;
    else if (case_name == "ii") s.c = SemiCase::s35_ii;
    else if (case_name == "iii") s.c = SemiCase::s35_iii;
    else throw ConstraintError("L36 case must be i, ii or iii");
  } else {
    if (case_name == "50") s.c = SemiCase::s50;
    else if (case_name == "51") s.c = SemiCase::s51;
    else throw ConstraintError("L52 case must be 50 or 51");
  }
  s.a1 = rp.get("a1", s.a1);
  s.a3 = rp.get("a3", s.a3);
  s.a4 = rp.get("a4", s.a4);
  s.beta = rp.get("beta", s.beta);
  s.gamma = rp.get("gamma", s.gamma);
  return s;
}

int cmd_reduce(const ReduceArgs& a, std::ostream& out) {
  Report r;
  r.command = "reduce";
  const auto id = parse_system_name(a.system);
  if (!id) throw ConstraintError("unknown system '" + a.system + "'");
  const ReduceParams rp = load_reduce_params(a, r.warnings);
  const std::string& name = a.system;

  ReducedSystem sys;
  std::optional<Fam40Spec> r38;
  std::vector<double> y0 = a.y0;
  double z0 = 0.0, z1 = 1.0;
  switch (*id) {
    case SystemId::R35:
      sys = make_r35(rp.need("alpha", name), rp.need("a1", name), rp.need("beta", name), rp.need("a3", name),
                     rp.need("a4", name), rp.get("d", 1.0));
      break;
    case SystemId::R38:
      z1 = 3.0;
      if (!a.case_name.empty()) {
        r38 = r38_spec(a.case_name, rp);
        const FamilyInstance fam = make_fam40(*r38);
        double beta = 0.0, a3 = 0.0, a4 = 0.0;
        for (const auto& [k, v] : fam.coefficients) {
          if (k == "beta") beta = v;
          if (k == "a3") a3 = v;
          if (k == "a4") a4 = v;
        }
        sys = make_r38(beta, r38->a1, a3, a4);
      } else {
        sys = make_r38(rp.need("beta", name), rp.need("a1", name), rp.need("a3", name), rp.need("a4", name));
      }
      break;
    case SystemId::R47:
      sys = make_r47(rp.need("alpha", name), rp.need("beta", name), rp.need("a3", name), rp.need("a4", name),
                     rp.get("d", 1.0));
      break;
    case SystemId::R58:
      if (!rp.coefficients) throw ConstraintError("R58 needs the eight coefficients (params section of --params)");
      sys = make_r58(rp.need("alpha", name), *rp.coefficients);
      break;
    case SystemId::T2a:
    case SystemId::T2b:
    case SystemId::T2c:
    case SystemId::T2d:
      sys = make_t2(*id, rp.get("alpha", 0.0), rp.get("beta", 0.0), rp.get("gamma", 0.0), rp.need("a1", name),
                    rp.need("a4", name));
      break;
    case SystemId::L36:
    case SystemId::L52: {
      if (a.case_name.empty()) throw ConstraintError(name + " needs --case");
      sys = semi_profile_system(semi_spec_for(name, a.case_name, rp));
      z0 = -21.0;
      z1 = 21.0;
      if (y0.empty()) y0 = {1.0, 0.0};
      break;
    }
  }
  if (a.from) z0 = *a.from;
  if (a.to) z1 = *a.to;
  if (r38 && y0.empty()) {
    const Densities s = closed_form_r38(*r38, z0);
    y0 = {s.u, s.v, s.w};
  }
  if (y0.size() != sys.dimension())
    throw ConstraintError(name + " needs --y0 with " + std::to_string(sys.dimension()) + " values");
  IntegrateOptions opts;
  opts.rel_tol = a.rtol;
  opts.abs_tol = a.atol;
  opts.max_step = a.max_step.value_or(sys.order() == 2 ? 0.01 : std::numeric_limits<double>::infinity());
  const ProfileTrajectory traj = integrate(sys, y0, z0, z1, opts);

  // Trajectory table.
  std::vector<std::string> header{std::string(sys.variable())};
  const char* names3[] = {"U", "V", "W"};
  if (sys.profiles() == 1) {
    header.insert(header.end(), {"P", "dP"});
  } else {
    for (std::size_t k = 0; k < 3; ++k) header.push_back(names3[k]);
    if (sys.order() == 2)
      for (std::size_t k = 0; k < 3; ++k) header.push_back(std::string("d") + names3[k]);
  }
  std::vector<std::vector<double>> rows;
  auto add_row = [&](double z, const std::vector<double>& y) {
    std::vector<double> row{z};
    row.insert(row.end(), y.begin(), y.end());
    rows.push_back(std::move(row));
  };
  if (a.samples >= 2) {
    for (std::size_t i = 0; i < a.samples; ++i) {
      const double z = traj.lo() + (traj.hi() - traj.lo()) * static_cast<double>(i) / static_cast<double>(a.samples - 1);
      add_row(z, traj.at(z));
    }
  } else {
    for (std::size_t i = 0; i < traj.nodes().size(); ++i) add_row(traj.nodes()[i], traj.states()[i]);
  }
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw ConstraintError("cannot write '" + a.out + "'");
    write_table(f, header, rows);
  } else {
    r.warnings.push_back("no --out given; trajectory table not written");
  }

  Json values = Json::object();
  for (const auto& [k, v] : rp.values) values[k] = v;
  r.inputs = Json{{"system", name},
                  {"case", a.case_name.empty() ? Json(nullptr) : Json(a.case_name)},
                  {"parameters", values},
                  {"coefficients", params_to_json(sys.params)},
                  {"y0", nums(y0)},
                  {"span", Json::array({z0, z1})},
                  {"rel_tol", opts.rel_tol},
                  {"abs_tol", opts.abs_tol},
                  {"max_step", num(opts.max_step)},
                  {"out", a.out.empty() ? Json(nullptr) : Json(a.out)}};
  const Ansatz ansatz = ansatz_for(sys);
  r.results = Json{{"variable", std::string(sys.variable())},
                   {"dimension", sys.dimension()},
                   {"ansatz", std::string(ansatz_name(ansatz.id))},
                   {"alpha", sys.alpha},
                   {"steps", traj.steps()},
                   {"final_state", nums(traj.states().back())},
                   {"interpolation_error_estimate", num(traj.interpolation_error_estimate())},
                   {"rows", rows.size()}};

  int code = 0;
  if (a.verify) {
    bool passed = true;
    if (r38) {
      double dev = 0.0;
      for (std::size_t i = 0; i < traj.nodes().size(); ++i) {
        const Densities ref = closed_form_r38(*r38, traj.nodes()[i]);
        const auto& y = traj.states()[i];
        dev = std::max(dev, max_abs(Densities{y[0], y[1], y[2]} - ref));
      }
      r.results["closed_form_max_deviation"] = num(dev);
      r.results["closed_form_tolerance"] = 1e-6;
      passed = passed && dev <= 1e-6;
    }
    const double lo = traj.lo(), hi = traj.hi();
    Window w;
    if (ansatz.traveling()) {
      const double margin = 0.5 + 4.0 * a.h * std::abs(sys.alpha);
      w = Window{lo + margin, hi - margin, 0.0};
    } else {
      w = Window{a.xmin, a.xmax, 0.5 * (lo + hi)};
      if (hi - lo <= 8.0 * a.h) throw ConstraintError("reduce --verify: t span too short for the time stencil");
    }
    if (!(w.x_max > w.x_min)) throw ConstraintError("reduce --verify: profile range too short for a window");
    const auto rep = verify_reduction(sys, ansatz, sys.params, trajectory_profiles(traj), w, refinement_levels(a.h));
    const bool order_ok = order_within(rep);
    r.residual = residual_json(rep, w);
    r.results["order_ok"] = order_ok;
    passed = passed && order_ok;
    r.results["passed"] = passed;
    code = passed ? 0 : 2;
  }
  r.write(out);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hunter-gatherer/farmer reaction-diffusion laboratory"};
  app.name("hgf");
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  app.add_subcommand("catalog", "List families, symmetry cases, operators, systems and ansatze");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Sample a family on a grid as CSV");
  add_family_flags(eval, ev.family);
  eval->add_option("--config", ev.config, "Run config file");
  eval->add_option("--t", ev.t, "Time");
  eval->add_option("--xmin", ev.xmin, "Left end");
  eval->add_option("--xmax", ev.xmax, "Right end");
  eval->add_option("--n", ev.n, "Number of grid points");
  eval->add_option("--out", ev.out, "CSV file (default: stdout)");

  ResidualArgs ra;
  auto* residual = app.add_subcommand("residual", "PDE residual of a family, optionally with refinement");
  add_family_flags(residual, ra.family);
  residual->add_option("--config", ra.config, "Run config file");
  residual->add_option("--h", ra.h, "Finest grid spacing")->capture_default_str();
  residual->add_option("--dt", ra.dt, "Time step of the residual stencil (default: h)");
  residual->add_option("--t", ra.t, "Time");
  residual->add_option("--xmin", ra.xmin, "Window left end");
  residual->add_option("--xmax", ra.xmax, "Window right end");
  residual->add_flag("--refine", ra.refine, "Refinement study over 4h, 2h, h");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Method-of-lines simulation from a config file");
  add_family_flags(simulate, sa.family);
  simulate->add_option("--config", sa.config, "Run config file")->required();
  simulate->add_option("--out", sa.out_dir, "Output directory")->required();
  simulate->add_option("--t-end", sa.t_end, "Final time");
  simulate->add_option("--cfl", sa.cfl, "Safety factor of the time step bound");
  simulate->add_option("--snapshot-every", sa.snapshot_every, "Steps between snapshots");

  SpeedArgs sp;
  auto* speed = app.add_subcommand("speed", "Front speed of a simulated run");
  speed->add_option("--run", sp.run_path, "Run directory or snapshot CSV")->required();
  speed->add_option("--component", sp.component, "u, v or w")->capture_default_str();
  speed->add_option("--level", sp.level, "Level to track")->capture_default_str();
  speed->add_option("--fit-start", sp.fit_start, "Start of the fit window (default: last half)");
  speed->add_option("--fit-end", sp.fit_end, "End of the fit window");

  auto* symmetry = app.add_subcommand("symmetry", "Symmetry operators");
  symmetry->require_subcommand(1);
  SymListArgs sl;
  auto* sym_list = symmetry->add_subcommand("list", "Admissible operators for a coefficient set");
  sym_list->add_option("--params", sl.params, "Coefficient file");
  add_coefficient_flags(sym_list, sl.coeffs);
  SymVerifyArgs sv;
  auto* sym_verify = symmetry->add_subcommand("verify", "Check that a flow maps a family to solutions");
  add_family_flags(sym_verify, sv.family);
  sym_verify->add_option("--config", sv.config, "Run config file");
  sym_verify->add_option("--params", sv.params, "Coefficient file (default: the family's)");
  sym_verify->add_option("--op", sv.op, "Operator name")->required();
  sym_verify->add_option("--eps", sv.eps, "Group parameter")->capture_default_str();
  sym_verify->add_option("--h", sv.h, "Finest grid spacing")->capture_default_str();
  sym_verify->add_option("--t", sv.t, "Time");
  sym_verify->add_option("--xmin", sv.xmin, "Window left end");
  sym_verify->add_option("--xmax", sv.xmax, "Window right end");
  sym_verify->add_option("--points", sv.points, "Random points for the group axioms")->capture_default_str();
  sym_verify->add_option("--seed", sv.seed, "Seed of the random points");
  sym_verify->add_option("--heat", sv.heat_kind, "Heat solution for Xinf")->capture_default_str();
  sym_verify->add_option("--heat-c0", sv.heat_c0, "constant/affine offset");
  sym_verify->add_option("--heat-c1", sv.heat_c1, "affine slope");
  sym_verify->add_option("--heat-a", sv.heat_a, "exponential/decaying-mode amplitude A");
  sym_verify->add_option("--heat-b", sv.heat_b, "decaying-mode amplitude B");
  sym_verify->add_option("--heat-mu", sv.heat_mu, "exponential/decaying-mode rate");
  for (const char* name : kCoefficientNames) {
    const std::string n = name;
    if (n == "a1" || n == "a3" || n == "a4" || n == "d3") continue;  // taken by the family flags
    sym_verify->add_option_function<double>(
        "--" + n, [&sv, n](const double& v) { sv.coeffs.values[n] = v; }, "Coefficient " + n);
  }

  ReduceArgs rd;
  auto* reduce = app.add_subcommand("reduce", "Integrate a reduced ODE system");
  reduce->add_option("--system", rd.system, "System name")->required();
  reduce->add_option("--case", rd.case_name, "R38: i|ii|iii, L36: i|ii|iii, L52: 50|51");
  reduce->add_option("--params", rd.params, "Parameter file");
  for (const char* name : kReduceNames) {
    const std::string n = name;
    reduce->add_option_function<double>(
        "--" + n, [&rd, n](const double& v) { rd.values[n] = v; }, "Parameter " + n);
  }
  reduce->add_option("--y0", rd.y0, "Initial state")->delimiter(',');
  reduce->add_option("--from", rd.from, "Start of the span");
  reduce->add_option("--to", rd.to, "End of the span");
  reduce->add_option("--samples", rd.samples, "Resample uniformly (default: integrator nodes)");
  reduce->add_option("--out", rd.out, "Trajectory CSV");
  reduce->add_flag("--verify", rd.verify, "Residual refinement of the reconstructed PDE field");
  reduce->add_option("--h", rd.h, "Finest grid spacing for --verify")->capture_default_str();
  reduce->add_option("--xmin", rd.xmin, "Window left end for t-systems")->capture_default_str();
  reduce->add_option("--xmax", rd.xmax, "Window right end for t-systems")->capture_default_str();
  reduce->add_option("--rtol", rd.rtol, "Relative tolerance")->capture_default_str();
  reduce->add_option("--atol", rd.atol, "Absolute tolerance")->capture_default_str();
  reduce->add_option("--max-step", rd.max_step, "Largest step");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("catalog")) return cmd_catalog(out);
    if (eval->parsed()) return cmd_eval(ev, out, err);
    if (residual->parsed()) return cmd_residual(ra, out);
    if (simulate->parsed()) return cmd_simulate(sa, out, err);
    if (speed->parsed()) return cmd_speed(sp, out);
    if (sym_list->parsed()) return cmd_symmetry_list(sl, out);
    if (sym_verify->parsed()) return cmd_symmetry_verify(sv, out);
    if (reduce->parsed()) return cmd_reduce(rd, out);
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "error: no command\n";
  return 1;
}

}  // namespace hgf::cli
