#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hgf/calculus.hpp"
#include "hgf/model.hpp"

namespace hgf {

enum class OpKind {
  Pt,
  Px,
  I,
  Xinf,
  Q1,
  UdV,
  Q2,
  ExpA4WdV,
  WdV_minus_a4WdW,
  Case9Op,
  Case10Op,
  Case12_WdV_minus_WdW,
  Case12_UdV_plus_1mUdW,
  Case12_ExpMinusT,
};

/// Contract strings, e.g. "Q1", "Case12_ExpMinusT".
std::string_view op_name(OpKind kind);
std::optional<OpKind> parse_op_name(std::string_view name);
const std::vector<OpKind>& all_op_kinds();

/// Closed-form solution of P_t = d2 P_xx used by the X-infinity flow.
struct HeatProfile {
  enum class Kind { constant, affine, exponential, decaying_mode };
  Kind kind = Kind::constant;
  double c0 = 1.0;  ///< constant, affine
  double c1 = 0.0;  ///< affine slope
  double A = 1.0;   ///< exponential, decaying_mode
  double B = 0.0;   ///< decaying_mode
  double mu = 1.0;  ///< exponential, decaying_mode
  double d2 = 1.0;

  double operator()(double t, double x) const;
};

std::string_view heat_kind_name(HeatProfile::Kind kind);
std::optional<HeatProfile::Kind> parse_heat_kind(std::string_view name);

/// Point of the (t, x, u, v, w) space acted on by a flow.
struct JetPoint {
  double t = 0.0;
  double x = 0.0;
  Densities y;
};

/// A classification operator bound to the coefficients its flow needs.
class SymmetryOp {
 public:
  /// Throws ConstraintError when p admits no classification case containing kind.
  static SymmetryOp make(OpKind kind, const Params& p, HeatProfile heat = {});

  OpKind kind() const { return kind_; }
  const Params& params() const { return params_; }
  const HeatProfile& heat() const { return heat_; }

  /// Finite group action on a point of (t, x, u, v, w) space.
  JetPoint apply(double eps, const JetPoint& q) const;
  /// Infinitesimal generator (xi0, xi1, eta1, eta2, eta3) at q.
  std::array<double, 5> generator(const JetPoint& q) const;
  /// Image of a solution: the graph of sol transformed by apply(eps).
  Solution flow(double eps, Solution sol) const;

 private:
  SymmetryOp(OpKind k, Params p, HeatProfile h) : kind_(k), params_(p), heat_(h) {}
  OpKind kind_;
  Params params_;
  HeatProfile heat_;
};

/// A matching classification case; case 0 is the principal algebra {Pt, Px}.
struct CaseMatch {
  int case_id = 0;
  std::vector<OpKind> ops;
  std::string restrictions;
};

/// Which classification restrictions p satisfies. Coefficients are compared exactly,
/// a5 = a1 a4 with relative tolerance 1e-12.
bool case_predicate(int case_id, const Params& p);
std::string case_restrictions(int case_id);
/// Operators listed in a case row (case 0: Pt, Px).
std::vector<OpKind> case_ops(int case_id);

/// Principal algebra first, then every matching case.
std::vector<CaseMatch> admissible_ops(const Params& p);
/// Union of the operators of all matching cases, in catalog order.
std::vector<OpKind> admissible_kinds(const Params& p);

struct FlowVerification {
  ResidualReport before;
  ResidualReport after;
  std::array<double, 3> truncation{};  ///< on the finest grid
  bool contract_ok = false;            ///< after.linf <= 10 (before.linf + truncation) per component
  bool order_ok = false;               ///< after-field refinement order 2 +- 0.2 (or exact zero)
  bool ok() const { return contract_ok && order_ok; }
};

/// Residual refinement of sol and of flow(eps, sol) on the same window.
FlowVerification verify_flow_maps_solutions(const SymmetryOp& op, double eps, const Solution& sol,
                                            const Window& window, const std::vector<double>& h_sequence,
                                            std::array<bool, 3> mask = {true, true, true});

/// Identity, composition and inverse of the flow on the given points,
/// componentwise within rel_tol relative to max(1, |a|, |b|).
bool flow_group_check(const SymmetryOp& op, double eps1, double eps2, const std::vector<JetPoint>& points,
                      double rel_tol = 1e-12);

/// Random points with t in [0, 1], x in [-5, 5], u, v, w in [-2, 2].
std::vector<JetPoint> random_jet_points(std::size_t count, unsigned seed);

}  // namespace hgf
