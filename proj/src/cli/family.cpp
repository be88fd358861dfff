#include "cli/family.hpp"

#include <algorithm>
#include <cmath>

#include "hgf/error.hpp"
#include "hgf/reduction.hpp"

namespace hgf::cli {

namespace {

bool is_fam40(const std::string& k) { return k.rfind("fam40-", 0) == 0; }
bool is_semi(const std::string& k) { return k.rfind("semi", 0) == 0; }

double get(const FamilyChoice& c, const std::string& name, double fallback) {
  const auto it = c.values.find(name);
  return it == c.values.end() ? fallback : it->second;
}

std::optional<double> get_opt(const FamilyChoice& c, const std::string& name) {
  const auto it = c.values.find(name);
  if (it == c.values.end()) return std::nullopt;
  return it->second;
}

FamilyKind kind_of(const std::string& key) {
  const auto k = parse_family_key(key);
  if (!k) throw ConstraintError("unknown family '" + key + "'");
  return *k;
}

Fam40Spec fam40_spec(const FamilyChoice& c, FamilyKind kind) {
  Fam40Spec s;
  s.c = kind == FamilyKind::fam40_i ? Fam40Case::i : (kind == FamilyKind::fam40_ii ? Fam40Case::ii : Fam40Case::iii);
  s.a1 = get(c, "a1", s.a1);
  // Case iii determines a4 from a1 and a3.
  s.a4 = get_opt(c, "a4");
  if (!s.a4 && s.c != Fam40Case::iii) s.a4 = 0.5;
  s.a3 = get_opt(c, "a3");
  s.beta = get_opt(c, "beta");
  s.delta1 = get(c, "delta1", s.delta1);
  s.delta2 = get(c, "delta2", s.delta2);
  s.d3 = get(c, "d3", s.d3);
  s.enforce_nonnegativity = c.enforce_nonnegativity;
  return s;
}

SemiExactSpec semi_spec(const FamilyChoice& c, FamilyKind kind) {
  SemiExactSpec s;
  switch (kind) {
    case FamilyKind::semi35_i: s.c = SemiCase::s35_i; break;
    case FamilyKind::semi35_ii: s.c = SemiCase::s35_ii; break;
    case FamilyKind::semi35_iii: s.c = SemiCase::s35_iii; break;
    case FamilyKind::semi50: s.c = SemiCase::s50; break;
    default: s.c = SemiCase::s51; break;
  }
  s.a1 = get(c, "a1", s.a1);
  s.a3 = get(c, "a3", s.a3);
  s.a4 = get(c, "a4", s.a4);
  s.beta = get(c, "beta", s.beta);
  s.gamma = get(c, "gamma", s.gamma);
  return s;
}

}  // namespace

const std::vector<std::string>& family_parameter_names(const std::string& key) {
  static const std::vector<std::string> none;
  static const std::vector<std::string> fam40{"a1", "a3", "a4", "beta", "delta1", "delta2", "d3"};
  static const std::vector<std::string> semi{"a1", "a3", "a4", "beta", "gamma", "p0", "dp0"};
  static const std::vector<std::string> tf63{"a1", "delta", "a3", "d3"};
  static const std::vector<std::string> tf65{"d"};
  const FamilyKind k = kind_of(key);
  if (k == FamilyKind::fisher) return none;
  if (k == FamilyKind::tf63) return tf63;
  if (k == FamilyKind::tf65) return tf65;
  return is_fam40(key) ? fam40 : semi;
}

std::string family_constraints(const std::string& key) {
  switch (kind_of(key)) {
    case FamilyKind::fisher: return "a1 = 0, v = w = 0; only u is defined";
    case FamilyKind::fam40_i:
      return "d1 = d2 = 1, a2 = 1, a3 = 1, a5 = a1 a4; nonnegativity: beta = sqrt((1-a4)/(a1(1+a1a4))), a4 < 1, "
             "delta1 > 1, delta2 < (1+a1)/(1+a1a4)";
    case FamilyKind::fam40_ii: return "d1 = d2 = 1, a2 = 1, a3 = 0, a5 = a1 a4; beta required";
    case FamilyKind::fam40_iii: return "d1 = d2 = 1, a2 = 1, a4 = 1 + a1 + a3, a3 != 0, a5 = a1 a4; beta required";
    case FamilyKind::semi35_i: return "d = a3 = 1; numeric profile of the linear equation";
    case FamilyKind::semi35_ii: return "d = 1, a3 = 0; numeric profile of the linear equation";
    case FamilyKind::semi35_iii: return "d = 1, a4 = 1 + a1 + a3; numeric profile of the linear equation";
    case FamilyKind::semi50: return "a1 = a5 = 0, d = 1; W = (1 - a4) phi; numeric V";
    case FamilyKind::semi51: return "a1 = a5 = 0, d = 1, a4 = 1 + a3; W = 1 - phi; numeric V";
    case FamilyKind::tf63: return "delta > 0, a1 < 1/(2 delta), induced d2 > 0; a2, a5 >= 0 for biological validity";
    case FamilyKind::tf65: return "0 < d <= 5/3";
  }
  return "";
}

void check_family_parameters(const FamilyChoice& choice) {
  const auto& names = family_parameter_names(choice.key);
  for (const auto& [name, value] : choice.values) {
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw ConstraintError("family " + choice.key + " has no parameter '" + name + "'");
    if (!std::isfinite(value)) throw ConstraintError("family parameter " + name + " must be finite");
  }
}

std::pair<double, double> omega_range(const FamilyChoice& choice, double x_lo, double x_hi, double t_lo,
                                      double t_hi) {
  check_family_parameters(choice);
  const FamilyKind k = kind_of(choice.key);
  double alpha = 0.0;
  if (is_semi(choice.key)) alpha = semi_profile_system(semi_spec(choice, k)).alpha;
  const double a = std::min(x_lo - alpha * t_lo, x_lo - alpha * t_hi);
  const double b = std::max(x_hi - alpha * t_lo, x_hi - alpha * t_hi);
  return {a - 1.0, b + 1.0};
}

FamilyInstance build_family(const FamilyChoice& choice, double omega_lo, double omega_hi) {
  check_family_parameters(choice);
  const FamilyKind k = kind_of(choice.key);
  switch (k) {
    case FamilyKind::fisher: return fisher_tf();
    case FamilyKind::tf63:
      return make_tf63(get(choice, "a1", 0.1), get(choice, "delta", 0.35), get(choice, "a3", 1.0),
                       get(choice, "d3", 3.0));
    case FamilyKind::tf65: return make_tf65(get(choice, "d", 1.0));
    case FamilyKind::fam40_i:
    case FamilyKind::fam40_ii:
    case FamilyKind::fam40_iii: return make_fam40(fam40_spec(choice, k));
    default: break;
  }
  const SemiExactSpec spec = semi_spec(choice, k);
  if (!(omega_hi > omega_lo)) throw ConstraintError("semi-exact profile range must be nonempty");
  IntegrateOptions opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-13;
  opts.max_step = 0.01;
  const auto traj = solve_semi_profile(spec, omega_lo, omega_hi, {get(choice, "p0", 1.0), get(choice, "dp0", 0.0)},
                                       opts, omega_lo);
  FamilyInstance inst = make_semi_exact(spec, scalar_profile(traj));
  inst.coefficients.emplace_back("profile_steps", static_cast<double>(traj.steps()));
  return inst;
}

}  // namespace hgf::cli
