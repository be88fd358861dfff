#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hgf/model.hpp"

namespace hgf {

/// omega(t, x) = x - alpha t.
struct TravelingFrame {
  double alpha = 0.0;
  double omega(double t, double x) const { return x - alpha * t; }
};

/// 1 - tanh(z) and 1 + tanh(z) without cancellation in the tails.
double one_minus_tanh(double z);
double one_plus_tanh(double z);

/// U = s1 (1 - tanh mu w)^k1,  V = s2 (1 - tanh mu w)^k2,  W = 1 - s3 (1 - tanh mu w)^k3.
struct TanhAnsatzParams {
  double sigma1 = 0, sigma2 = 0, sigma3 = 0;
  double k1 = 0, k2 = 0, k3 = 0;
  double mu = 0;

  Densities evaluate(double omega) const;
  /// Residuals of the conditions that make the profile run from
  /// (U0, V0, 0) at -infinity to (0, 0, 1) at +infinity:
  /// 1 - 2^k1 s1 - a1 2^k2 s2 and 1 - 2^k3 s3.
  std::pair<double, double> endpoint_conditions(double a1) const;
};

enum class FamilyKind {
  fisher,
  fam40_i,
  fam40_ii,
  fam40_iii,
  semi35_i,
  semi35_ii,
  semi35_iii,
  semi50,
  semi51,
  tf63,
  tf65,
};

/// CLI/JSON key of a family, e.g. "tf63", "fam40-i", "semi50".
std::string_view family_key(FamilyKind kind);
std::optional<FamilyKind> parse_family_key(std::string_view key);
const std::vector<FamilyKind>& all_family_kinds();

struct Endpoint {
  std::string where;  ///< "omega->-inf" or "omega->+inf"
  Densities state;
};

/// A closed-form or semi-closed-form solution of one HGF instance.
struct FamilyInstance {
  FamilyKind kind = FamilyKind::fisher;
  Params params;                               ///< coefficients the solution is exact for
  Solution evaluate;                           ///< (t, x) -> (u, v, w)
  std::array<bool, 3> defined{true, true, true};  ///< components the family defines
  std::optional<double> speed;                 ///< traveling-frame speed, if any
  std::vector<Endpoint> endpoints;             ///< constant asymptotic states
  std::vector<std::pair<std::string, double>> coefficients;  ///< family parameters, for reports
  std::vector<std::string> warnings;           ///< exact but biologically invalid choices etc.

  std::string_view key() const { return family_key(kind); }
};

/// Fisher front u = 1/4 (1 - tanh(omega / (2 sqrt 6)))^2, omega = x - 5/sqrt(6) t.
/// Embedded in the HGF system with a1 = 0 and v = w = 0; only u is defined.
FamilyInstance fisher_tf();

/// Speed of the Fisher front, 5/sqrt(6).
double fisher_speed();

/// One-parameter traveling-front family of the unit-d1 system, connecting
/// (1 - 2 a1 delta, 2 delta, 0) to (0, 0, 1). Requires delta > 0,
/// a1 < 1/(2 delta) and a positive induced d2. a3 and d3 stay free; the
/// remaining coefficients are induced.
FamilyInstance make_tf63(double a1, double delta, double a3, double d3);

/// Advisory restrictions that accompany the front family's coefficient formulas.
/// They are not enforced; make_tf63 checks d2 > 0, a2 >= 0, a5 >= 0 directly.
/// The first entry (the a3 bound) points the opposite way from a5 >= 0.
struct Tf63AdvisoryCheck {
  bool a3_upper_bound = false;  ///< a3 <= (-5 + 4 delta a1 + d3 - 2 delta a1 d3)/6
  bool d3_lower_bound = false;  ///< d3 >= (5 - 4 delta a1)/(1 - 2 delta a1)
  bool a1_upper_bound = false;  ///< piecewise bound on a1 in terms of delta
  bool direct_positivity = false;  ///< d2 > 0, a2 >= 0, a5 >= 0 from the formulas
};
Tf63AdvisoryCheck tf63_advisory_restrictions(double a1, double delta, double a3, double d3);

/// Front with the Fisher speed for
///   u_t = u_xx + u(1-u),  v_t = v_xx/2 + v(1-u) + u w,
///   w_t = d w_xx + (5-d)/6 w(1-w) - 5/3 u w,   0 < d <= 5/3.
FamilyInstance make_tf65(double d);

enum class Fam40Case { i, ii, iii };

/// Spatially exponential family u = U(t) exp(-beta a1 x), v = V(t) - u/a1,
/// w = W(t) of the Q1-symmetric system (d1 = d2 = 1, a2 = 1, a5 = a1 a4).
struct Fam40Spec {
  Fam40Case c = Fam40Case::i;
  double a1 = 0.1;
  /// Required in cases i and ii. Case iii determines it as 1 + a1 + a3; a
  /// supplied value that disagrees is a case/parameter mismatch.
  std::optional<double> a4 = 0.5;
  /// Case i fixes 1, case ii fixes 0 (a disagreeing value is a mismatch);
  /// case iii requires a nonzero value.
  std::optional<double> a3;
  std::optional<double> beta;  ///< default: case i positivity value, otherwise required
  double delta1 = 2.0;
  double delta2 = 0.5;
  double d3 = 1.0;  ///< w does not depend on x, so d3 is free
  /// Case i: enforce the positivity restrictions on beta, a4, delta1, delta2.
  bool enforce_nonnegativity = true;
};

FamilyInstance make_fam40(const Fam40Spec& spec);

/// (U, V, W)(t) of the family, i.e. the closed-form solution of the
/// t-reduced system. Throws NumericalError where the denominator
/// 1 - delta1 + delta1 exp(k t) is not positive, naming the critical t.
Densities fam40_profiles(const Fam40Spec& spec, double t);

/// beta = sqrt((1 - a4)/(a1 (1 + a1 a4))), the value making the case-i
/// family nonnegative for x > 0 and bounded as t -> infinity.
double fam40_positivity_beta(double a1, double a4);

/// t -> infinity limit of the case-i family under the positivity restrictions,
/// as a function of x.
std::function<Densities(double x)> fam40_long_time_limit(const Fam40Spec& spec);

enum class SemiCase { s35_i, s35_ii, s35_iii, s50, s51 };

/// A numerically supplied profile on [lo, hi].
struct ScalarProfile {
  std::function<double(double)> value;
  double lo = 0.0;
  double hi = 0.0;
};

/// Linear profile equation  P'' + alpha P' + q(omega) P + f(omega) = 0.
struct LinearProfileOde {
  double alpha = 0.0;
  std::function<double(double)> potential;  ///< q
  std::function<double(double)> forcing;    ///< f
};

struct SemiExactSpec {
  SemiCase c = SemiCase::s35_i;
  double a1 = 0.1;     ///< 35-cases only
  double a3 = 1.0;     ///< 35-iii and 51
  double a4 = 0.5;     ///< 35-i, 35-ii, 50; determined in 35-iii and 51
  double beta = 0.5;
  double gamma = 0.0;  ///< 50 and 51
};

/// Coefficients shared by the semi-exact cases built on the Q1 symmetry.
struct Semi35Coefficients {
  double kappa1 = 0.0;
  double kappa2 = 1.0;
  double alpha = 0.0;
};
Semi35Coefficients semi35_coefficients(const SemiExactSpec& spec);

/// The linear equation the numeric profile must satisfy for this case.
LinearProfileOde semi_exact_profile_ode(const SemiExactSpec& spec);

/// Closed-form (V, W) parts of the 35-cases, and (U, W) of the 50/51 cases,
/// as functions of omega. Component u of the result is U for 50/51.
Densities semi_exact_closed_part(const SemiExactSpec& spec, double omega);

/// Composes the closed-form parts with a numeric profile. The profile is
/// checked against semi_exact_profile_ode at interior sample points; a
/// profile that does not solve it (for instance V = 0 against the forced
/// 50/51 equation) is rejected. Evaluating outside [lo, hi] throws.
FamilyInstance make_semi_exact(const SemiExactSpec& spec, ScalarProfile profile);

std::string_view semi_case_name(SemiCase c);

}  // namespace hgf
