#include "hgf/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "hgf/error.hpp"

namespace hgf {

namespace {

bool finite_all(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double dot(const Densities& a, const Densities& b) { return a.u * b.u + a.v * b.v + a.w * b.w; }

double norm(const Densities& a) { return std::sqrt(dot(a, a)); }

// Relative zero test used for degeneracy decisions in the case analysis.
bool near_zero(double value, double scale) { return std::abs(value) <= 1e-12 * std::max(1.0, scale); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

SteadyState point(Densities p, std::string description) { return {p, {}, std::move(description)}; }

}  // namespace

double max_abs(const Densities& d) { return std::max({std::abs(d.u), std::abs(d.v), std::abs(d.w)}); }

void OriginalParams::validate() const {
  if (!finite_all({d_f, d_c, d_h, r_f, r_c, r_h, K, L, e1, e2}))
    throw ConstraintError("original parameters must be finite");
  if (r_f == 0.0) throw ConstraintError("r_f must be nonzero (it divides every rescaled coefficient)");
  if (K == 0.0) throw ConstraintError("a4-zero: K must be nonzero (a4 = K/r_f != 0)");
  if (!(d_f > 0 && d_c > 0 && d_h > 0)) throw ConstraintError("diffusivities d_f, d_c, d_h must be positive");
  if (!(K > 0 && L > 0)) throw ConstraintError("carrying capacities K, L must be positive");
  if (!(e1 > 0)) throw ConstraintError("conversion rate e1 must be positive");
  if (!(r_f > 0)) throw ConstraintError("growth rate r_f must be positive");
  if (!(e2 >= 0 && r_c >= 0 && r_h >= 0)) throw ConstraintError("e2, r_c, r_h must be nonnegative");
}

void Params::validate() const {
  if (!finite_all({a1, a2, a3, a4, a5, d1, d2, d3})) throw ConstraintError("coefficients must be finite");
  if (a4 == 0.0) throw ConstraintError("a4-zero: a4 must be nonzero");
  if (!(d1 > 0 && d2 > 0 && d3 > 0)) throw ConstraintError("diffusivities d1, d2, d3 must be positive");
}

void Params::validate_biological() const {
  validate();
  if (!(a2 >= 0 && a3 >= 0 && a5 >= 0)) throw ConstraintError("a2, a3, a5 must be nonnegative");
}

double Params::max_diffusivity() const { return std::max({d1, d2, d3}); }

Params rescale_params(const OriginalParams& o, Normalization normalization) {
  // K = 0 is reported before the generic sign checks so the message names a4.
  if (o.r_f == 0.0) throw ConstraintError("r_f must be nonzero (it divides every rescaled coefficient)");
  if (o.K == 0.0) throw ConstraintError("a4-zero: K must be nonzero (a4 = K/r_f != 0)");
  o.validate();
  Params p;
  p.a1 = o.e2 * o.L / o.r_f;
  p.a2 = o.r_c / o.r_f;
  p.a3 = o.r_h / o.r_f;
  p.a4 = o.K / o.r_f;
  p.a5 = o.e2 * o.K * o.L / (o.r_f * o.r_f);
  p.d1 = o.d_f;
  p.d2 = o.d_c;
  p.d3 = o.d_h;
  if (normalization == Normalization::unit_first_diffusivity) return normalize_first_diffusivity(p);
  return p;
}

Params normalize_first_diffusivity(const Params& p) {
  p.validate();
  Params q = p;
  q.d1 = 1.0;
  q.d2 = p.d2 / p.d1;
  q.d3 = p.d3 / p.d1;
  return q;
}

Densities kinetics(const Params& p, const Densities& s) {
  const double logistic = 1.0 - s.u - p.a1 * s.v;
  return {s.u * logistic,
          p.a2 * s.v * logistic + s.u * s.w + p.a1 * s.v * s.w,
          p.a3 * s.w * (1.0 - s.w) - p.a4 * s.u * s.w - p.a5 * s.v * s.w};
}

Densities original_kinetics(const OriginalParams& p, const Densities& fch) {
  const double F = fch.u, C = fch.v, H = fch.w;
  const double crowding = 1.0 - (p.e1 * F + p.e2 * C) / p.K;
  return {p.r_f * F * crowding,
          p.r_c * C * crowding + p.e1 * F * H + p.e2 * C * H,
          p.r_h * H * (1.0 - H / p.L) - p.e1 * F * H - p.e2 * C * H};
}

Solution reflect_solution(Solution sol) {
  return [sol = std::move(sol)](double t, double x) { return sol(t, -x); };
}

Solution to_original_variables(const OriginalParams& orig, Solution nondimensional) {
  orig.validate();
  const double scale_f = orig.K / orig.e1;
  const double scale_c = orig.K * orig.L / orig.r_f;
  const double scale_h = orig.L;
  const double time_scale = orig.r_f;
  const double space_scale = std::sqrt(orig.r_f);
  return [=, sol = std::move(nondimensional)](double t, double x) {
    const Densities s = sol(time_scale * t, space_scale * x);
    return Densities{scale_f * s.u, scale_c * s.v, scale_h * s.w};
  };
}

SteadyState::Kind SteadyState::kind() const {
  switch (directions.size()) {
    case 0: return Kind::isolated_point;
    case 1: return Kind::line_family;
    default: return Kind::plane_family;
  }
}

Densities SteadyState::at(double s, double r) const {
  Densities q = point;
  if (!directions.empty()) q = q + s * directions[0];
  if (directions.size() > 1) q = q + r * directions[1];
  return q;
}

double SteadyState::distance(const Densities& q) const {
  // Project onto an orthonormal basis of the direction span.
  Densities diff = q - point;
  std::vector<Densities> basis;
  for (const auto& d : directions) {
    Densities e = d;
    for (const auto& b : basis) e = e - dot(e, b) * b;
    const double n = norm(e);
    if (n > 0) basis.push_back((1.0 / n) * e);
  }
  for (const auto& b : basis) diff = diff - dot(diff, b) * b;
  return norm(diff);
}

bool is_steady_state(const Params& p, const Densities& s, double tol) { return max_abs(kinetics(p, s)) <= tol; }

std::string to_string(SteadyState::Kind kind) {
  switch (kind) {
    case SteadyState::Kind::isolated_point: return "isolated-point";
    case SteadyState::Kind::line_family: return "line-family";
    case SteadyState::Kind::plane_family: return "plane-family";
  }
  return "unknown";
}

std::vector<SteadyState> steady_states(const Params& p) {
  p.validate();
  std::vector<SteadyState> found;

  // u != 0 forces u + a1 v = 1, and then C2 = w.
  found.push_back({{1.0, 0.0, 0.0}, {{-p.a1, 1.0, 0.0}}, "{(1 - a1*s, s, 0)} with a1 = " + fmt(p.a1)});

  // u = 0, v = 0: C3 = a3 w (1 - w).
  if (p.a3 == 0.0) {
    found.push_back({{0.0, 0.0, 0.0}, {{0.0, 0.0, 1.0}}, "{(0, 0, s)} (a3 = 0)"});
  } else {
    found.push_back(point({0.0, 0.0, 0.0}, "(0, 0, 0)"));
    found.push_back(point({0.0, 0.0, 1.0}, "(0, 0, 1)"));
  }

  // u = 0, w = 0, v != 0: a2 v (1 - a1 v) = 0. v = 1/a1 lies on the first line.
  if (p.a2 == 0.0) found.push_back({{0.0, 0.0, 0.0}, {{0.0, 1.0, 0.0}}, "{(0, s, 0)} (a2 = 0)"});

  // u = 0, v != 0, w != 0:  a5 v + a3 w = a3  and  -a1 a2 v + a1 w = -a2.
  {
    const double m00 = p.a5, m01 = p.a3, b0 = p.a3;
    const double m10 = -p.a1 * p.a2, m11 = p.a1, b1 = -p.a2;
    const double scale = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11), 1.0});
    const double det = p.a1 * (p.a5 + p.a2 * p.a3);
    if (!near_zero(det, scale * scale)) {
      const double v = (b0 * m11 - m01 * b1) / det;
      const double w = (m00 * b1 - m10 * b0) / det;
      found.push_back(point({0.0, v, w}, "(0, " + fmt(v) + ", " + fmt(w) + ")"));
    } else {
      const bool row0 = !(near_zero(m00, scale) && near_zero(m01, scale));
      const bool row1 = !(near_zero(m10, scale) && near_zero(m11, scale));
      if (!row0 && !row1) {
        if (near_zero(b0, scale) && near_zero(b1, scale))
          found.push_back({{0.0, 0.0, 0.0}, {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}, "{(0, s, r)}"});
      } else {
        // Rank one: consistent iff the augmented matrix also has rank one.
        const bool consistent = near_zero(m00 * b1 - m10 * b0, scale * scale) &&
                                near_zero(m01 * b1 - m11 * b0, scale * scale) &&
                                (row0 || near_zero(b0, scale)) && (row1 || near_zero(b1, scale));
        if (consistent) {
          const double r0 = row0 ? m00 : m10, r1 = row0 ? m01 : m11, rhs = row0 ? b0 : b1;
          const double nn = r0 * r0 + r1 * r1;
          const Densities base{0.0, r0 * rhs / nn, r1 * rhs / nn};
          found.push_back({base, {{0.0, -r1, r0}}, "{(0, v, w) : " + fmt(r0) + "*v + " + fmt(r1) + "*w = " + fmt(rhs) + "}"});
        }
      }
    }
  }

  // Drop sets contained in a reported set of higher dimension, and duplicates.
  auto contained = [](const SteadyState& small, const SteadyState& big) {
    if (!big.contains(small.point, 1e-12)) return false;
    for (const auto& d : small.directions) {
      if (!big.contains(small.point + d, 1e-12 * std::max(1.0, norm(d)))) return false;
    }
    return true;
  };
  std::vector<SteadyState> result;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < found.size() && !redundant; ++j) {
      if (i == j) continue;
      const bool bigger = found[j].directions.size() > found[i].directions.size();
      const bool same_dim_earlier = found[j].directions.size() == found[i].directions.size() && j < i;
      if ((bigger || same_dim_earlier) && contained(found[i], found[j])) redundant = true;
    }
    if (!redundant) result.push_back(found[i]);
  }
  std::stable_sort(result.begin(), result.end(), [](const SteadyState& a, const SteadyState& b) {
    return a.directions.size() < b.directions.size();
  });
  return result;
}

}  // namespace hgf
