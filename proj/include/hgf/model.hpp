#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace hgf {

enum class Component : std::size_t { u = 0, v = 1, w = 2 };

/// Densities (u, v, w) of initial farmers, converted farmers and
/// hunter-gatherers. Also used for rate triples and profile triples.
struct Densities {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  double& operator[](std::size_t k) { return k == 0 ? u : (k == 1 ? v : w); }
  double operator[](std::size_t k) const { return k == 0 ? u : (k == 1 ? v : w); }
  double& operator[](Component c) { return (*this)[static_cast<std::size_t>(c)]; }
  double operator[](Component c) const { return (*this)[static_cast<std::size_t>(c)]; }

  friend Densities operator+(Densities a, const Densities& b) { return {a.u + b.u, a.v + b.v, a.w + b.w}; }
  friend Densities operator-(Densities a, const Densities& b) { return {a.u - b.u, a.v - b.v, a.w - b.w}; }
  friend Densities operator*(double s, const Densities& a) { return {s * a.u, s * a.v, s * a.w}; }
  friend bool operator==(const Densities&, const Densities&) = default;
};

double max_abs(const Densities& d);

/// Coefficients of the dimensional farmer/hunter-gatherer model.
struct OriginalParams {
  double d_f = 1.0, d_c = 1.0, d_h = 1.0;  ///< diffusivities
  double r_f = 1.0, r_c = 0.0, r_h = 0.0;  ///< intrinsic growth rates
  double K = 1.0, L = 1.0;                  ///< carrying capacities
  double e1 = 1.0, e2 = 0.0;                ///< conversion rates

  /// Throws ConstraintError unless d_f, d_c, d_h, K, L, e1, r_f > 0 and
  /// e2, r_c, r_h >= 0.
  void validate() const;
};

/// The eight nondimensional coefficients of the HGF system
///   u_t = d1 u_xx + u(1 - u - a1 v)
///   v_t = d2 v_xx + a2 v(1 - u - a1 v) + u w + a1 v w
///   w_t = d3 w_xx + a3 w(1 - w) - a4 u w - a5 v w
struct Params {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 1.0, a5 = 0.0;
  double d1 = 1.0, d2 = 1.0, d3 = 1.0;

  /// Throws ConstraintError unless a4 != 0 and d1, d2, d3 > 0 (all finite).
  void validate() const;
  /// Additionally requires a2, a3, a5 >= 0, the signs inherited from the
  /// dimensional model.
  void validate_biological() const;

  std::array<double, 3> diffusivities() const { return {d1, d2, d3}; }
  double max_diffusivity() const;

  friend bool operator==(const Params&, const Params&) = default;
};

enum class Normalization { none, unit_first_diffusivity };

/// Maps dimensional coefficients to the nondimensional ones. With
/// unit_first_diffusivity the result is additionally passed through
/// normalize_first_diffusivity.
Params rescale_params(const OriginalParams& orig, Normalization normalization = Normalization::none);

/// Equivalence x -> x / sqrt(d1): divides all diffusivities by d1.
Params normalize_first_diffusivity(const Params& p);

/// Reaction terms (C1, C2, C3) of the HGF system.
Densities kinetics(const Params& p, const Densities& s);

/// Reaction terms of the dimensional model, state ordered (F, C, H).
Densities original_kinetics(const OriginalParams& p, const Densities& fch);

/// A (t, x) -> (u, v, w) field.
using Solution = std::function<Densities(double t, double x)>;

/// (t, x) -> sol(t, -x).
Solution reflect_solution(Solution sol);

/// Undoes the nondimensional rescaling: returns (F, C, H)(t, x) in
/// dimensional variables for a solution of the nondimensional system with
/// coefficients rescale_params(orig).
Solution to_original_variables(const OriginalParams& orig, Solution nondimensional);

/// Constant solution set: base point plus 0, 1 or 2 direction vectors.
struct SteadyState {
  enum class Kind { isolated_point, line_family, plane_family };

  Densities point;
  std::vector<Densities> directions;
  std::string description;

  Kind kind() const;
  /// Euclidean distance from q to the affine set.
  double distance(const Densities& q) const;
  bool contains(const Densities& q, double tol = 1e-12) const { return distance(q) <= tol; }
  /// point + s * directions[0] (+ r * directions[1]).
  Densities at(double s, double r = 0.0) const;
};

/// Kinetics tolerance for "is a steady state".
inline constexpr double kSteadyStateTolerance = 1e-12;

bool is_steady_state(const Params& p, const Densities& s, double tol = kSteadyStateTolerance);

/// All constant solutions of kinetics = 0, as isolated points and affine
/// families. Sets contained in a larger reported set are not repeated.
std::vector<SteadyState> steady_states(const Params& p);

std::string to_string(SteadyState::Kind kind);

}  // namespace hgf
