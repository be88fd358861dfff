#include "hgf/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hgf/error.hpp"

namespace hgf {

namespace {

struct OpEntry {
  OpKind kind;
  std::string_view name;
};

constexpr OpEntry kOps[] = {
    {OpKind::Pt, "Pt"},
    {OpKind::Px, "Px"},
    {OpKind::I, "I"},
    {OpKind::Xinf, "Xinf"},
    {OpKind::Q1, "Q1"},
    {OpKind::UdV, "UdV"},
    {OpKind::Q2, "Q2"},
    {OpKind::ExpA4WdV, "ExpA4WdV"},
    {OpKind::WdV_minus_a4WdW, "WdV_minus_a4WdW"},
    {OpKind::Case9Op, "Case9Op"},
    {OpKind::Case10Op, "Case10Op"},
    {OpKind::Case12_WdV_minus_WdW, "Case12_WdV_minus_WdW"},
    {OpKind::Case12_UdV_plus_1mUdW, "Case12_UdV_plus_1mUdW"},
    {OpKind::Case12_ExpMinusT, "Case12_ExpMinusT"},
};

bool rel_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

bool all_d_equal(const Params& p) { return p.d1 == p.d2 && p.d2 == p.d3; }

// Shared restrictions of cases 10 to 12.
bool case10_base(const Params& p) { return all_d_equal(p) && p.a1 == 0 && p.a3 == 0 && p.a4 == 1 && p.a5 == 0; }

// The invariant combination of the case 9 operator.
double case9_s(const Params& p, const Densities& y) {
  return (p.a4 - 1.0) / p.a1 * y.u + (p.a4 - 1.0) * y.v + y.w + (1.0 - p.a4) / p.a1;
}

}  // namespace

std::string_view op_name(OpKind kind) {
  for (const auto& e : kOps)
    if (e.kind == kind) return e.name;
  return "unknown";
}

std::optional<OpKind> parse_op_name(std::string_view name) {
  for (const auto& e : kOps)
    if (e.name == name) return e.kind;
  return std::nullopt;
}

const std::vector<OpKind>& all_op_kinds() {
  static const std::vector<OpKind> kinds = [] {
    std::vector<OpKind> k;
    for (const auto& e : kOps) k.push_back(e.kind);
    return k;
  }();
  return kinds;
}

double HeatProfile::operator()(double t, double x) const {
  switch (kind) {
    case Kind::constant: return c0;
    case Kind::affine: return c0 + c1 * x;
    case Kind::exponential: return A * std::exp(mu * x + d2 * mu * mu * t);
    case Kind::decaying_mode: return std::exp(-d2 * mu * mu * t) * (A * std::cos(mu * x) + B * std::sin(mu * x));
  }
  return 0.0;
}

std::string_view heat_kind_name(HeatProfile::Kind kind) {
  switch (kind) {
    case HeatProfile::Kind::constant: return "constant";
    case HeatProfile::Kind::affine: return "affine";
    case HeatProfile::Kind::exponential: return "exponential";
    case HeatProfile::Kind::decaying_mode: return "decaying-mode";
  }
  return "unknown";
}

std::optional<HeatProfile::Kind> parse_heat_kind(std::string_view name) {
  for (auto k : {HeatProfile::Kind::constant, HeatProfile::Kind::affine, HeatProfile::Kind::exponential,
                 HeatProfile::Kind::decaying_mode})
    if (heat_kind_name(k) == name) return k;
  return std::nullopt;
}

bool case_predicate(int id, const Params& p) {
  switch (id) {
    case 0: return true;
    case 1: return p.a1 == 0 && p.a3 == 0 && p.a5 == 0 && p.a2 != 0;
    case 2: return p.a1 == 0 && p.a2 == 0 && p.a5 == 0 && p.a3 != 0;
    case 3: return p.a1 == 0 && p.a2 == 0 && p.a3 == 0 && p.a5 == 0;
    case 4: return p.d1 == p.d2 && p.a2 == 1 && p.a1 != 0 && rel_equal(p.a5, p.a1 * p.a4);
    case 5: return p.d1 == p.d2 && p.a1 == 0 && p.a2 == 1 && p.a5 == 0 && p.a3 != 0;
    case 6: return p.d1 == p.d2 && p.a1 == 0 && p.a2 == 1 && p.a5 == 0 && p.a3 == 0;
    case 7: return p.d2 == p.d3 && p.a1 == 0 && p.a2 == p.a4 && p.a3 == 0 && p.a5 == 0;
    case 8: return p.d2 == p.d3 && p.a1 == 0 && p.a2 == 0 && p.a3 == 0 && p.a5 == 0;
    case 9: return all_d_equal(p) && p.a2 == 1 && p.a3 == 0 && p.a1 != 0 && rel_equal(p.a5, p.a1 * p.a4);
    case 10: return case10_base(p) && p.a2 != 0 && p.a2 != 1;
    case 11: return case10_base(p) && p.a2 == 1;
    case 12: return case10_base(p) && p.a2 == 0;
    default: return false;
  }
}

std::string case_restrictions(int id) {
  switch (id) {
    case 0: return "arbitrary coefficients";
    case 1: return "a1 = a3 = a5 = 0, a2 != 0";
    case 2: return "a1 = a2 = a5 = 0, a3 != 0";
    case 3: return "a1 = a2 = a3 = a5 = 0";
    case 4: return "d1 = d2, a2 = 1, a5 = a1 a4, a1 != 0";
    case 5: return "d1 = d2, a1 = 0, a2 = 1, a5 = 0, a3 != 0";
    case 6: return "d1 = d2, a1 = 0, a2 = 1, a3 = a5 = 0";
    case 7: return "d2 = d3, a1 = 0, a2 = a4, a3 = a5 = 0";
    case 8: return "d2 = d3, a1 = a2 = a3 = a5 = 0";
    case 9: return "d1 = d2 = d3, a2 = 1, a3 = 0, a5 = a1 a4, a1 != 0";
    case 10: return "d1 = d2 = d3, a1 = a3 = a5 = 0, a4 = 1, a2 not in {0, 1}";
    case 11: return "d1 = d2 = d3, a1 = a3 = a5 = 0, a4 = 1, a2 = 1";
    case 12: return "d1 = d2 = d3, a1 = a3 = a5 = 0, a4 = 1, a2 = 0";
    default: return "";
  }
}

std::vector<OpKind> case_ops(int id) {
  using K = OpKind;
  switch (id) {
    case 0: return {K::Pt, K::Px};
    case 1: return {K::I};
    case 2: return {K::Xinf};
    case 3: return {K::I, K::Xinf};
    case 4: return {K::Q1};
    case 5: return {K::UdV, K::Q2};
    case 6: return {K::UdV, K::I, K::Q2};
    case 7: return {K::ExpA4WdV, K::I};
    case 8: return {K::WdV_minus_a4WdW, K::I, K::Xinf};
    case 9: return {K::Q1, K::Case9Op};
    case 10: return {K::I, K::Case10Op};
    case 11: return {K::UdV, K::ExpA4WdV, K::I, K::Q2};
    case 12: return {K::Case12_WdV_minus_WdW, K::Case12_UdV_plus_1mUdW, K::Case12_ExpMinusT, K::I, K::Xinf};
    default: return {};
  }
}

std::vector<CaseMatch> admissible_ops(const Params& p) {
  p.validate();
  std::vector<CaseMatch> out;
  for (int id = 0; id <= 12; ++id)
    if (case_predicate(id, p)) out.push_back({id, case_ops(id), case_restrictions(id)});
  return out;
}

std::vector<OpKind> admissible_kinds(const Params& p) {
  std::vector<OpKind> kinds;
  for (const auto& m : admissible_ops(p))
    for (OpKind k : m.ops)
      if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  std::vector<OpKind> ordered;
  for (OpKind k : all_op_kinds())
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) ordered.push_back(k);
  return ordered;
}

SymmetryOp SymmetryOp::make(OpKind kind, const Params& p, HeatProfile heat) {
  const auto kinds = admissible_kinds(p);
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    throw ConstraintError("operator " + std::string(op_name(kind)) + " is not admissible for these coefficients");
  heat.d2 = p.d2;
  return SymmetryOp(kind, p, heat);
}

JetPoint SymmetryOp::apply(double eps, const JetPoint& q) const {
  const Params& p = params_;
  JetPoint r = q;
  const double u = q.y.u, v = q.y.v, w = q.y.w;
  switch (kind_) {
    case OpKind::Pt: r.t = q.t + eps; break;
    case OpKind::Px: r.x = q.x + eps; break;
    case OpKind::I:
      r.y.v = std::exp(eps) * v;
      r.y.w = std::exp(eps) * w;
      break;
    case OpKind::Xinf: r.y.v = v + eps * heat_(q.t, q.x); break;
    case OpKind::Q1: {
      const double e = std::exp(-p.a1 * eps);
      r.y.u = e * u;
      r.y.v = v - std::expm1(-p.a1 * eps) * u / p.a1;
      break;
    }
    case OpKind::UdV: r.y.v = v + eps * u; break;
    case OpKind::Q2: r.y.v = v + eps * std::exp(q.t) * (u - 1.0); break;
    case OpKind::ExpA4WdV: r.y.v = v + eps * std::exp(p.a4 * q.t) * w; break;
    case OpKind::WdV_minus_a4WdW:
      r.y.w = std::exp(-p.a4 * eps) * w;
      r.y.v = v - std::expm1(-p.a4 * eps) * w / p.a4;
      break;
    case OpKind::Case9Op: {
      const double s = case9_s(p, q.y);
      r.y.u = u + eps * std::exp(q.t) * s;
      r.y.v = v - eps / p.a1 * std::exp(q.t) * s;
      break;
    }
    case OpKind::Case10Op:
      r.y.v = v + eps * u;
      r.y.w = w + eps * (p.a2 - 1.0) * (u - 1.0);
      break;
    case OpKind::Case12_WdV_minus_WdW:
      r.y.w = std::exp(-eps) * w;
      r.y.v = v - std::expm1(-eps) * w;
      break;
    case OpKind::Case12_UdV_plus_1mUdW:
      r.y.v = v + eps * u;
      r.y.w = w + eps * (1.0 - u);
      break;
    case OpKind::Case12_ExpMinusT:
      r.y.v = v + eps * std::exp(-q.t) * u;
      r.y.w = w - eps * std::exp(-q.t) * u;
      break;
  }
  return r;
}

std::array<double, 5> SymmetryOp::generator(const JetPoint& q) const {
  const Params& p = params_;
  const double u = q.y.u, v = q.y.v, w = q.y.w;
  switch (kind_) {
    case OpKind::Pt: return {1, 0, 0, 0, 0};
    case OpKind::Px: return {0, 1, 0, 0, 0};
    case OpKind::I: return {0, 0, 0, v, w};
    case OpKind::Xinf: return {0, 0, 0, heat_(q.t, q.x), 0};
    case OpKind::Q1: return {0, 0, -p.a1 * u, u, 0};
    case OpKind::UdV: return {0, 0, 0, u, 0};
    case OpKind::Q2: return {0, 0, 0, std::exp(q.t) * (u - 1.0), 0};
    case OpKind::ExpA4WdV: return {0, 0, 0, std::exp(p.a4 * q.t) * w, 0};
    case OpKind::WdV_minus_a4WdW: return {0, 0, 0, w, -p.a4 * w};
    case OpKind::Case9Op: {
      const double s = std::exp(q.t) * case9_s(p, q.y);
      return {0, 0, s, -s / p.a1, 0};
    }
    case OpKind::Case10Op: return {0, 0, 0, u, (p.a2 - 1.0) * (u - 1.0)};
    case OpKind::Case12_WdV_minus_WdW: return {0, 0, 0, w, -w};
    case OpKind::Case12_UdV_plus_1mUdW: return {0, 0, 0, u, 1.0 - u};
    case OpKind::Case12_ExpMinusT: return {0, 0, 0, std::exp(-q.t) * u, -std::exp(-q.t) * u};
  }
  return {};
}

Solution SymmetryOp::flow(double eps, Solution sol) const {
  if (kind_ == OpKind::Pt) return [eps, sol = std::move(sol)](double t, double x) { return sol(t - eps, x); };
  if (kind_ == OpKind::Px) return [eps, sol = std::move(sol)](double t, double x) { return sol(t, x - eps); };
  // The remaining flows leave (t, x) fixed and act on the dependent variables.
  return [op = *this, eps, sol = std::move(sol)](double t, double x) {
    return op.apply(eps, JetPoint{t, x, sol(t, x)}).y;
  };
}

FlowVerification verify_flow_maps_solutions(const SymmetryOp& op, double eps, const Solution& sol,
                                            const Window& window, const std::vector<double>& h_sequence,
                                            std::array<bool, 3> mask) {
  const ReactionDiffusionSystem sys = ReactionDiffusionSystem::hgf(op.params());
  FlowVerification fv;
  const Solution image = op.flow(eps, sol);
  fv.before = refinement_study(sys, sol, window, h_sequence);
  fv.after = refinement_study(sys, image, window, h_sequence);
  const SpaceGrid finest = SpaceGrid::with_spacing(window.x_min, window.x_max, h_sequence.back());
  fv.truncation = truncation_estimate(sys, image, finest, window.t, fv.after.dt);
  fv.contract_ok = true;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!mask[k]) continue;
    if (!(fv.after.linf[k] <= 10.0 * (fv.before.linf[k] + fv.truncation[k]))) fv.contract_ok = false;
  }
  fv.order_ok = order_within(fv.after, 2.0, 0.2, mask);
  return fv;
}

namespace {

bool close(const JetPoint& a, const JetPoint& b, double tol) {
  const double xa[5] = {a.t, a.x, a.y.u, a.y.v, a.y.w};
  const double xb[5] = {b.t, b.x, b.y.u, b.y.v, b.y.w};
  for (int i = 0; i < 5; ++i) {
    if (!(std::abs(xa[i] - xb[i]) <= tol * std::max({1.0, std::abs(xa[i]), std::abs(xb[i])}))) return false;
  }
  return true;
}

}  // namespace

bool flow_group_check(const SymmetryOp& op, double eps1, double eps2, const std::vector<JetPoint>& points,
                      double rel_tol) {
  for (const auto& q : points) {
    if (!close(op.apply(0.0, q), q, rel_tol)) return false;
    if (!close(op.apply(eps1, op.apply(eps2, q)), op.apply(eps1 + eps2, q), rel_tol)) return false;
    if (!close(op.apply(-eps1, op.apply(eps1, q)), q, rel_tol)) return false;
  }
  return true;
}

std::vector<JetPoint> random_jet_points(std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, 1.0), ux(-5.0, 5.0), uy(-2.0, 2.0);
  std::vector<JetPoint> pts(count);
  for (auto& p : pts) {
    p.t = ut(rng);
    p.x = ux(rng);
    p.y.u = uy(rng);
    p.y.v = uy(rng);
    p.y.w = uy(rng);
  }
  return pts;
}

}  // namespace hgf
