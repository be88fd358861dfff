#include "hgf/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hgf/error.hpp"

namespace hgf {

namespace {

const double kSqrt6 = std::sqrt(6.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Extended-precision 1 - tanh(z). Closed-form fields are evaluated in long
// double and rounded once, which keeps the sample noise seen by second
// differences at h = 1e-3 well under the truncation error.
long double one_minus_tanh_ext(long double z) {
  if (z > 0) {
    const long double e = std::exp(-2.0L * z);
    return 2.0L * e / (1.0L + e);
  }
  return 2.0L / (1.0L + std::exp(2.0L * z));
}

// (1/4)(1 - tanh(k omega / (2 sqrt 6)))^2, the Fisher profile with steepness k.
double fisher_phi(double k, double omega) {
  const long double m = one_minus_tanh_ext(static_cast<long double>(k) * omega / (2.0L * std::sqrt(6.0L)));
  return static_cast<double>(0.25L * m * m);
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

Params q1_system(double a1, double a3, double a4, double d3) {
  Params p;
  p.a1 = a1;
  p.a2 = 1.0;
  p.a3 = a3;
  p.a4 = a4;
  p.a5 = a1 * a4;
  p.d1 = 1.0;
  p.d2 = 1.0;
  p.d3 = d3;
  return p;
}

}  // namespace

double one_minus_tanh(double z) {
  if (z > 0) {
    const double e = std::exp(-2.0 * z);
    return 2.0 * e / (1.0 + e);
  }
  return 2.0 / (1.0 + std::exp(2.0 * z));
}

double one_plus_tanh(double z) { return one_minus_tanh(-z); }

Densities TanhAnsatzParams::evaluate(double omega) const {
  const long double m = one_minus_tanh_ext(static_cast<long double>(mu) * omega);
  return {static_cast<double>(sigma1 * std::pow(m, static_cast<long double>(k1))),
          static_cast<double>(sigma2 * std::pow(m, static_cast<long double>(k2))),
          static_cast<double>(1.0L - sigma3 * std::pow(m, static_cast<long double>(k3)))};
}

std::pair<double, double> TanhAnsatzParams::endpoint_conditions(double a1) const {
  return {1.0 - std::pow(2.0, k1) * sigma1 - a1 * std::pow(2.0, k2) * sigma2, 1.0 - std::pow(2.0, k3) * sigma3};
}

std::string_view family_key(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::fisher: return "fisher";
    case FamilyKind::fam40_i: return "fam40-i";
    case FamilyKind::fam40_ii: return "fam40-ii";
    case FamilyKind::fam40_iii: return "fam40-iii";
    case FamilyKind::semi35_i: return "semi35-i";
    case FamilyKind::semi35_ii: return "semi35-ii";
    case FamilyKind::semi35_iii: return "semi35-iii";
    case FamilyKind::semi50: return "semi50";
    case FamilyKind::semi51: return "semi51";
    case FamilyKind::tf63: return "tf63";
    case FamilyKind::tf65: return "tf65";
  }
  return "unknown";
}

const std::vector<FamilyKind>& all_family_kinds() {
  static const std::vector<FamilyKind> kinds{
      FamilyKind::fisher,    FamilyKind::fam40_i,    FamilyKind::fam40_ii, FamilyKind::fam40_iii,
      FamilyKind::semi35_i,  FamilyKind::semi35_ii,  FamilyKind::semi35_iii, FamilyKind::semi50,
      FamilyKind::semi51,    FamilyKind::tf63,       FamilyKind::tf65};
  return kinds;
}

std::optional<FamilyKind> parse_family_key(std::string_view key) {
  for (FamilyKind k : all_family_kinds())
    if (family_key(k) == key) return k;
  return std::nullopt;
}

double fisher_speed() { return 5.0 / kSqrt6; }

FamilyInstance fisher_tf() {
  FamilyInstance f;
  f.kind = FamilyKind::fisher;
  f.params = Params{0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0};
  const TravelingFrame frame{fisher_speed()};
  f.evaluate = [frame](double t, double x) { return Densities{fisher_phi(1.0, frame.omega(t, x)), 0.0, 0.0}; };
  f.defined = {true, false, false};
  f.speed = frame.alpha;
  f.endpoints = {{"omega->-inf", {1.0, 0.0, 0.0}}, {"omega->+inf", {0.0, 0.0, 0.0}}};
  f.coefficients = {{"alpha", frame.alpha}, {"mu", 1.0 / (2.0 * kSqrt6)}};
  return f;
}

Tf63AdvisoryCheck tf63_advisory_restrictions(double a1, double delta, double a3, double d3) {
  Tf63AdvisoryCheck c;
  const double ad = a1 * delta;
  c.a3_upper_bound = a3 <= (-5.0 + 4.0 * ad + d3 - 2.0 * ad * d3) / 6.0;
  c.d3_lower_bound = d3 >= (5.0 - 4.0 * ad) / (1.0 - 2.0 * ad);
  if (delta > 1.0) {
    c.a1_upper_bound = a1 <= 1.0 / (2.0 * delta);
  } else if (delta >= 0.3) {
    c.a1_upper_bound = a1 <= (-3.0 + 10.0 * delta) / (2.0 * delta * (3.0 + 4.0 * delta));
  } else {
    c.a1_upper_bound = false;  // no range is known for delta < 3/10
  }
  const double den = -3.0 + 2.0 * ad;
  const double d2 = (-3.0 - 5.0 * delta + 6.0 * ad + 4.0 * ad * delta) / (delta * den);
  const double a2 = (3.0 - 10.0 * delta + 6.0 * ad + 8.0 * ad * delta) / (6.0 * delta * den);
  const double a5 = (5.0 - d3 + 6.0 * a3 - 4.0 * ad + 2.0 * ad * d3) / (12.0 * delta);
  c.direct_positivity = d2 > 0 && a2 >= 0 && a5 >= 0;
  return c;
}

FamilyInstance make_tf63(double a1, double delta, double a3, double d3) {
  if (!std::isfinite(a1) || !std::isfinite(delta) || !std::isfinite(a3) || !std::isfinite(d3))
    throw ConstraintError("tf63: parameters must be finite");
  if (!(delta > 0)) throw ConstraintError("tf63: delta > 0 is required (otherwise v is negative)");
  if (!(a1 * delta < 0.5))
    throw ConstraintError("tf63: a1 < 1/(2 delta) is required (otherwise the steepness is complex or zero)");
  if (!(d3 > 0)) throw ConstraintError("tf63: d3 > 0 is required");

  const double ad = a1 * delta;
  const double den = -3.0 + 2.0 * ad;  // nonzero since a1 delta < 1/2
  const double d2 = (-3.0 - 5.0 * delta + 6.0 * ad + 4.0 * ad * delta) / (delta * den);
  if (!(d2 > 0)) throw ConstraintError("tf63: induced d2 = " + fmt(d2) + " must be positive");

  Params p;
  p.a1 = a1;
  p.a2 = (3.0 - 10.0 * delta + 6.0 * ad + 8.0 * ad * delta) / (6.0 * delta * den);
  p.a3 = a3;
  p.a4 = d3 / 3.0;
  p.a5 = (5.0 - d3 + 6.0 * a3 - 4.0 * ad + 2.0 * ad * d3) / (12.0 * delta);
  p.d1 = 1.0;
  p.d2 = d2;
  p.d3 = d3;

  const double alpha = (5.0 - 4.0 * ad) / std::sqrt(6.0 - 12.0 * ad);
  TanhAnsatzParams tanh_params;
  tanh_params.sigma1 = 0.25 * (1.0 - 2.0 * ad);
  tanh_params.k1 = 2.0;
  tanh_params.sigma2 = delta;
  tanh_params.k2 = 1.0;
  tanh_params.sigma3 = 0.5;
  tanh_params.k3 = 1.0;
  tanh_params.mu = std::sqrt(1.0 - 2.0 * ad) / (2.0 * kSqrt6);

  FamilyInstance f;
  f.kind = FamilyKind::tf63;
  f.params = p;
  const TravelingFrame frame{alpha};
  f.evaluate = [frame, tanh_params](double t, double x) { return tanh_params.evaluate(frame.omega(t, x)); };
  f.speed = alpha;
  f.endpoints = {{"omega->-inf", {1.0 - 2.0 * ad, 2.0 * delta, 0.0}}, {"omega->+inf", {0.0, 0.0, 1.0}}};
  f.coefficients = {{"a1", a1},   {"delta", delta}, {"a3", a3},     {"d3", d3},     {"alpha", alpha},
                    {"mu", tanh_params.mu}, {"d2", d2}, {"a2", p.a2}, {"a4", p.a4}, {"a5", p.a5}};
  if (p.a2 < 0) f.warnings.push_back("tf63: induced a2 = " + fmt(p.a2) + " < 0; exact but biologically invalid");
  if (p.a5 < 0) f.warnings.push_back("tf63: induced a5 = " + fmt(p.a5) + " < 0; exact but biologically invalid");

  const Tf63AdvisoryCheck adv = tf63_advisory_restrictions(a1, delta, a3, d3);
  if (adv.direct_positivity && !adv.a3_upper_bound)
    f.warnings.push_back(
        "tf63: the advisory bound a3 <= (-5 + 4 delta a1 + d3 - 2 delta a1 d3)/6 fails although a5 >= 0; "
        "a5 >= 0 is equivalent to the reversed inequality, so the bound is treated as advisory");
  return f;
}

FamilyInstance make_tf65(double d) {
  if (!std::isfinite(d) || !(d > 0) || !(d <= 5.0 / 3.0))
    throw ConstraintError("tf65: 0 < d <= 5/3 is required for nonnegative components, got d = " + fmt(d));
  Params p;
  p.a1 = 0.0;
  p.a2 = 1.0;
  p.a3 = (5.0 - d) / 6.0;
  p.a4 = 5.0 / 3.0;
  p.a5 = 0.0;
  p.d1 = 1.0;
  p.d2 = 0.5;
  p.d3 = d;
  const double cv = (3.0 * d - 5.0) / (3.0 * (d - 5.0));
  const double cw = (3.0 * d - 5.0) / (2.0 * (d - 5.0));
  const double mu = 1.0 / (2.0 * kSqrt6);
  const TravelingFrame frame{fisher_speed()};

  FamilyInstance f;
  f.kind = FamilyKind::tf65;
  f.params = p;
  f.evaluate = [frame, cv, cw, mu](double t, double x) {
    const long double z = static_cast<long double>(mu) * frame.omega(t, x);
    const long double m = one_minus_tanh_ext(z), p = one_minus_tanh_ext(-z);
    return Densities{static_cast<double>(0.25L * m * m), static_cast<double>(cv * m * m * m),
                     static_cast<double>(cw * m * p)};
  };
  f.speed = frame.alpha;
  f.endpoints = {{"omega->-inf", {1.0, 8.0 * (3.0 * d - 5.0) / (3.0 * (d - 5.0)), 0.0}},
                 {"omega->+inf", {0.0, 0.0, 0.0}}};
  f.coefficients = {{"d", d}, {"alpha", frame.alpha}, {"mu", mu}, {"v_amplitude", cv}, {"w_amplitude", cw}};
  return f;
}

double fam40_positivity_beta(double a1, double a4) {
  const double r = (1.0 - a4) / (a1 * (1.0 + a1 * a4));
  if (!(r >= 0) || !std::isfinite(r))
    throw ConstraintError("fam40-i: (1 - a4)/(a1 (1 + a1 a4)) must be nonnegative for a real positivity beta");
  return std::sqrt(r);
}

namespace {

struct Fam40Resolved {
  double a1, a3, a4, beta, delta1, delta2, d3;
  double rate;      // exponent k of e^{k t} in the denominator
  double exponent;  // power of the denominator under U
};

Fam40Resolved resolve_fam40(const Fam40Spec& s) {
  const char* name = s.c == Fam40Case::i ? "fam40-i" : (s.c == Fam40Case::ii ? "fam40-ii" : "fam40-iii");
  const std::string tag = name;
  if (!std::isfinite(s.a1) || s.a1 == 0.0) throw ConstraintError(tag + ": a1 must be nonzero");
  if (!(s.delta1 > 0 && s.delta2 > 0)) throw ConstraintError(tag + ": delta1 and delta2 must be positive");
  if (!(s.d3 > 0)) throw ConstraintError(tag + ": d3 must be positive");
  Fam40Resolved r{};
  r.a1 = s.a1;
  r.delta1 = s.delta1;
  r.delta2 = s.delta2;
  r.d3 = s.d3;
  switch (s.c) {
    case Fam40Case::i:
      if (s.a3 && *s.a3 != 1.0) throw ConstraintError(tag + ": case/parameter mismatch, case i requires a3 = 1");
      if (!s.a4) throw ConstraintError(tag + ": a4 is required");
      r.a3 = 1.0;
      r.a4 = *s.a4;
      if (1.0 + r.a1 * r.a4 == 0.0) throw ConstraintError(tag + ": 1 + a1 a4 must be nonzero");
      r.rate = 1.0;
      r.exponent = (1.0 + r.a1) / (1.0 + r.a1 * r.a4);
      break;
    case Fam40Case::ii:
      if (s.a3 && *s.a3 != 0.0) throw ConstraintError(tag + ": case/parameter mismatch, case ii requires a3 = 0");
      if (!s.a4) throw ConstraintError(tag + ": a4 is required");
      r.a3 = 0.0;
      r.a4 = *s.a4;
      r.rate = r.a4;
      r.exponent = 1.0 / r.a4;
      break;
    case Fam40Case::iii:
      if (!s.a3 || *s.a3 == 0.0) throw ConstraintError(tag + ": case iii requires a nonzero a3");
      r.a3 = *s.a3;
      r.a4 = 1.0 + r.a1 + r.a3;
      if (s.a4 && !same(*s.a4, r.a4))
        throw ConstraintError(tag + ": case/parameter mismatch, case iii requires a4 = 1 + a1 + a3 = " + fmt(r.a4));
      if (1.0 + r.a1 == 0.0) throw ConstraintError(tag + ": 1 + a1 must be nonzero");
      r.rate = 1.0 + r.a1;
      r.exponent = 1.0 / (1.0 + r.a1);
      break;
  }
  if (r.a4 == 0.0) throw ConstraintError(tag + ": a4 must be nonzero");

  if (s.c == Fam40Case::i && s.enforce_nonnegativity) {
    if (!(r.a4 < 1.0)) throw ConstraintError(tag + ": the positivity restrictions require a4 < 1");
    if (!(r.delta1 > 1.0)) throw ConstraintError(tag + ": the positivity restrictions require delta1 > 1");
    const double cap = (1.0 + r.a1) / (1.0 + r.a1 * r.a4);
    if (!(r.delta2 < cap))
      throw ConstraintError(tag + ": the positivity restrictions require delta2 < (1 + a1)/(1 + a1 a4) = " + fmt(cap));
    const double b = fam40_positivity_beta(r.a1, r.a4);
    if (s.beta && !same(*s.beta, b))
      throw ConstraintError(tag + ": the positivity restrictions require beta = sqrt((1 - a4)/(a1 (1 + a1 a4))) = " +
                            fmt(b));
    r.beta = b;
  } else if (s.beta) {
    r.beta = *s.beta;
  } else if (s.c == Fam40Case::i) {
    r.beta = fam40_positivity_beta(r.a1, r.a4);
  } else {
    throw ConstraintError(tag + ": beta is required");
  }
  if (!std::isfinite(r.beta)) throw ConstraintError(tag + ": beta must be finite");
  return r;
}

// log(1 - d1 + d1 e^{z}) and d1 e^{z} / (1 - d1 + d1 e^{z}), overflow-free.
struct DenominatorTerms {
  double log_den;
  double ratio;
};

DenominatorTerms denominator_terms(double delta1, double z, double t, double rate) {
  double inner;  // den * e^{-max(z, 0)}
  if (z > 0) {
    inner = delta1 + (1.0 - delta1) * std::exp(-z);
  } else {
    inner = 1.0 - delta1 + delta1 * std::exp(z);
  }
  if (!(inner > 0)) {
    std::string where;
    if (delta1 > 1.0) where = ", critical t = " + fmt(std::log((delta1 - 1.0) / delta1) / rate);
    throw NumericalError("fam40: denominator 1 - delta1 + delta1 exp(k t) <= 0 at t = " + fmt(t) + where);
  }
  DenominatorTerms d;
  d.log_den = std::log(inner) + std::max(z, 0.0);
  d.ratio = z > 0 ? delta1 / inner : delta1 * std::exp(z) / inner;
  return d;
}

// (U e^{-beta a1 x}, V, W): the x factor is folded into the exponent so that
// large t does not overflow before the denominator divides it out.
Densities fam40_profiles_resolved(const Fam40Resolved& r, Fam40Case c, double growth, double t, double x) {
  const DenominatorTerms d = denominator_terms(r.delta1, r.rate * t, t, r.rate);
  const double U = r.delta2 * std::exp(growth * t - r.beta * r.a1 * x - r.exponent * d.log_den);
  double V = 0.0, W = 0.0;
  switch (c) {
    case Fam40Case::i:
      V = (1.0 + r.a1) / (r.a1 * (1.0 + r.a1 * r.a4)) * d.ratio;
      W = (1.0 - r.a4) / (1.0 + r.a1 * r.a4) * d.ratio;
      break;
    case Fam40Case::ii:
      V = d.ratio / r.a1;
      W = (1.0 - r.a4) * (r.delta1 - 1.0) / r.a1 * std::exp(-d.log_den);
      break;
    case Fam40Case::iii:
      V = d.ratio / r.a1;
      W = (1.0 - r.delta1) * std::exp(-d.log_den);
      break;
  }
  return {U, V, W};
}

}  // namespace

FamilyInstance make_fam40(const Fam40Spec& spec) {
  const Fam40Resolved r = resolve_fam40(spec);
  FamilyInstance f;
  f.kind = spec.c == Fam40Case::i ? FamilyKind::fam40_i
                                  : (spec.c == Fam40Case::ii ? FamilyKind::fam40_ii : FamilyKind::fam40_iii);
  f.params = q1_system(r.a1, r.a3, r.a4, r.d3);
  const Fam40Case c = spec.c;
  const double growth = 1.0 + r.beta * r.beta * r.a1 * r.a1;
  f.evaluate = [r, c, growth](double t, double x) {
    const Densities P = fam40_profiles_resolved(r, c, growth, t, x);
    return Densities{P.u, P.v - P.u / r.a1, P.w};
  };
  f.coefficients = {{"a1", r.a1},         {"a3", r.a3},         {"a4", r.a4},
                    {"beta", r.beta},     {"delta1", r.delta1}, {"delta2", r.delta2},
                    {"d3", r.d3},         {"growth_rate", growth}, {"denominator_power", r.exponent}};
  if (spec.c == Fam40Case::i && !spec.enforce_nonnegativity) {
    const bool ok = r.a4 < 1.0 && r.delta1 > 1.0 && r.delta2 < (1.0 + r.a1) / (1.0 + r.a1 * r.a4);
    if (!ok) f.warnings.push_back("fam40-i: positivity restrictions not met; components may be negative");
  }
  if (spec.c != Fam40Case::i && r.delta1 < 1.0)
    f.warnings.push_back("fam40: delta1 < 1 makes the denominator vanish at a finite negative time");
  return f;
}

Densities fam40_profiles(const Fam40Spec& spec, double t) {
  const Fam40Resolved r = resolve_fam40(spec);
  return fam40_profiles_resolved(r, spec.c, 1.0 + r.beta * r.beta * r.a1 * r.a1, t, 0.0);
}

std::function<Densities(double x)> fam40_long_time_limit(const Fam40Spec& spec) {
  if (spec.c != Fam40Case::i) throw ConstraintError("fam40 long-time limit is provided for case i only");
  Fam40Spec strict = spec;
  strict.enforce_nonnegativity = true;
  const Fam40Resolved r = resolve_fam40(strict);
  const double E = (1.0 + r.a1) / (1.0 + r.a1 * r.a4);
  const double amp = r.delta2 * std::pow(r.delta1, -E);
  return [r, E, amp](double x) {
    const double u = amp * std::exp(-r.beta * r.a1 * x);
    return Densities{u, E / r.a1 - u / r.a1, (1.0 - r.a4) / (1.0 + r.a1 * r.a4)};
  };
}

std::string_view semi_case_name(SemiCase c) {
  switch (c) {
    case SemiCase::s35_i: return "semi35-i";
    case SemiCase::s35_ii: return "semi35-ii";
    case SemiCase::s35_iii: return "semi35-iii";
    case SemiCase::s50: return "semi50";
    case SemiCase::s51: return "semi51";
  }
  return "unknown";
}

namespace {

bool is35(SemiCase c) { return c == SemiCase::s35_i || c == SemiCase::s35_ii || c == SemiCase::s35_iii; }

void check_semi_spec(const SemiExactSpec& s) {
  const std::string tag(semi_case_name(s.c));
  if (!std::isfinite(s.beta) || !std::isfinite(s.gamma) || !std::isfinite(s.a1) || !std::isfinite(s.a3) ||
      !std::isfinite(s.a4))
    throw ConstraintError(tag + ": parameters must be finite");
  if (is35(s.c) && s.a1 == 0.0) throw ConstraintError(tag + ": a1 must be nonzero");
  switch (s.c) {
    case SemiCase::s35_i:
      if (1.0 + s.a1 * s.a4 == 0.0) throw ConstraintError(tag + ": 1 + a1 a4 must be nonzero");
      break;
    case SemiCase::s35_ii:
      if (!(s.a4 > 0)) throw ConstraintError(tag + ": a4 > 0 is required for a real steepness sqrt(a4)");
      break;
    case SemiCase::s35_iii:
      if (s.a3 == 0.0) throw ConstraintError(tag + ": a3 must be nonzero");
      if (!(1.0 + s.a1 > 0)) throw ConstraintError(tag + ": 1 + a1 > 0 is required for a real steepness");
      break;
    case SemiCase::s50:
    case SemiCase::s51:
      break;
  }
  if (s.a4 == 0.0 && s.c != SemiCase::s35_iii && s.c != SemiCase::s51)
    throw ConstraintError(tag + ": a4 must be nonzero");
}

double semi_a4(const SemiExactSpec& s) {
  if (s.c == SemiCase::s35_iii) return 1.0 + s.a1 + s.a3;
  if (s.c == SemiCase::s51) return 1.0 + s.a3;
  return s.a4;
}

}  // namespace

Semi35Coefficients semi35_coefficients(const SemiExactSpec& s) {
  Semi35Coefficients c;
  switch (s.c) {
    case SemiCase::s35_i:
      c.kappa1 = (1.0 + s.a1) / (4.0 * (1.0 + s.a1 * s.a4));
      c.kappa2 = 1.0;
      break;
    case SemiCase::s35_ii:
      c.kappa1 = 0.25;
      c.kappa2 = std::sqrt(s.a4);
      break;
    case SemiCase::s35_iii:
      c.kappa1 = 0.25;
      c.kappa2 = std::sqrt(1.0 + s.a1);
      break;
    case SemiCase::s50:
    case SemiCase::s51:
      c.kappa1 = 0.0;
      c.kappa2 = 1.0;
      break;
  }
  c.alpha = 5.0 * c.kappa2 / kSqrt6;
  return c;
}

Densities semi_exact_closed_part(const SemiExactSpec& s, double omega) {
  const Semi35Coefficients c = semi35_coefficients(s);
  const double phi = fisher_phi(c.kappa2, omega);
  switch (s.c) {
    case SemiCase::s35_i:
      return {0.0, (1.0 + s.a1) / (s.a1 * (1.0 + s.a1 * s.a4)) * phi, (1.0 - s.a4) / (1.0 + s.a1 * s.a4) * phi};
    case SemiCase::s35_ii:
      return {0.0, phi / s.a1, (1.0 - s.a4) / s.a1 * (phi - 1.0)};
    case SemiCase::s35_iii:
      return {0.0, phi / s.a1, 1.0 - phi};
    case SemiCase::s50:
      return {phi, 0.0, (1.0 - s.a4) * phi};
    case SemiCase::s51:
      return {phi, 0.0, 1.0 - phi};
  }
  return {};
}

LinearProfileOde semi_exact_profile_ode(const SemiExactSpec& s) {
  check_semi_spec(s);
  const Semi35Coefficients c = semi35_coefficients(s);
  LinearProfileOde ode;
  ode.alpha = c.alpha;
  if (is35(s.c)) {
    const double base = 1.0 + s.a1 * s.beta;
    ode.potential = [base, c](double omega) {
      const double m = one_minus_tanh(c.kappa2 * omega / (2.0 * kSqrt6));
      return base - c.kappa1 * m * m;
    };
    ode.forcing = [](double) { return 0.0; };
  } else {
    ode.potential = [s](double omega) { return 1.0 - semi_exact_closed_part(s, omega).u; };
    ode.forcing = [s](double omega) {
      const Densities cp = semi_exact_closed_part(s, omega);
      return cp.u * (cp.w - s.beta);
    };
  }
  return ode;
}

FamilyInstance make_semi_exact(const SemiExactSpec& spec, ScalarProfile profile) {
  check_semi_spec(spec);
  const std::string tag(semi_case_name(spec.c));
  if (!profile.value) throw ConstraintError(tag + ": no profile supplied");
  if (!(profile.hi > profile.lo)) throw ConstraintError(tag + ": profile domain must be a nonempty interval");

  // Check the supplied profile against its linear equation at interior
  // sample points; the FD error of the check is far below the threshold.
  const LinearProfileOde ode = semi_exact_profile_ode(spec);
  const double span = profile.hi - profile.lo;
  const double hh = std::min(1e-3, span / 100.0);
  const int samples = 33;
  for (int i = 1; i < samples - 1; ++i) {
    const double z = profile.lo + span * i / (samples - 1);
    if (z - hh < profile.lo || z + hh > profile.hi) continue;
    const double p0 = profile.value(z), pp = profile.value(z + hh), pm = profile.value(z - hh);
    const double d2 = (pp - 2.0 * p0 + pm) / (hh * hh);
    const double d1 = (pp - pm) / (2.0 * hh);
    const double q = ode.potential(z) * p0, f = ode.forcing(z);
    const double res = d2 + ode.alpha * d1 + q + f;
    const double scale = std::max({std::abs(d2), std::abs(ode.alpha * d1), std::abs(q), std::abs(f)});
    if (!std::isfinite(res) || std::abs(res) > 1e-4 * scale + 1e-9)
      throw ConstraintError(tag + ": supplied profile does not solve its linear profile equation near omega = " +
                            fmt(z) + " (residual " + fmt(res) + ")");
  }

  FamilyInstance f;
  switch (spec.c) {
    case SemiCase::s35_i: f.kind = FamilyKind::semi35_i; break;
    case SemiCase::s35_ii: f.kind = FamilyKind::semi35_ii; break;
    case SemiCase::s35_iii: f.kind = FamilyKind::semi35_iii; break;
    case SemiCase::s50: f.kind = FamilyKind::semi50; break;
    case SemiCase::s51: f.kind = FamilyKind::semi51; break;
  }
  const double a4 = semi_a4(spec);
  if (is35(spec.c)) {
    const double a3 = spec.c == SemiCase::s35_i ? 1.0 : (spec.c == SemiCase::s35_ii ? 0.0 : spec.a3);
    f.params = q1_system(spec.a1, a3, a4, 1.0);
  } else {
    f.params = Params{0.0, 1.0, spec.c == SemiCase::s50 ? 1.0 : spec.a3, a4, 0.0, 1.0, 1.0, 1.0};
  }
  const Semi35Coefficients c = semi35_coefficients(spec);
  const TravelingFrame frame{c.alpha};
  SemiExactSpec s = spec;
  s.a4 = a4;
  const auto state = [s, frame, profile, tag](double t, double x) {
    const double omega = frame.omega(t, x);
    if (omega < profile.lo || omega > profile.hi)
      throw ConstraintError(tag + ": omega = " + fmt(omega) + " outside the profile domain [" + fmt(profile.lo) +
                            ", " + fmt(profile.hi) + "]");
    const double P = profile.value(omega);
    const Densities cp = semi_exact_closed_part(s, omega);
    if (is35(s.c)) {
      const double u = std::exp(-s.beta * s.a1 * t) * P;
      return Densities{u, cp.v - u / s.a1, cp.w};
    }
    const double g = s.gamma * std::exp(t);
    return Densities{cp.u, P + (s.beta * t + g) * cp.u - g, cp.w};
  };
  f.evaluate = state;
  f.speed = c.alpha;
  f.coefficients = {{"alpha", c.alpha}, {"beta", spec.beta}, {"a4", a4}};
  if (is35(spec.c)) {
    f.coefficients.push_back({"a1", spec.a1});
    f.coefficients.push_back({"kappa1", c.kappa1});
    f.coefficients.push_back({"kappa2", c.kappa2});
  } else {
    f.coefficients.push_back({"gamma", spec.gamma});
  }
  f.coefficients.push_back({"profile_lo", profile.lo});
  f.coefficients.push_back({"profile_hi", profile.hi});
  return f;
}

}  // namespace hgf
