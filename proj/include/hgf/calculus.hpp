#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hgf/model.hpp"

namespace hgf {

/// Uniform grid x_i = x_min + i h, i = 0..n-1.
struct SpaceGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 5;

  /// Spacing; 0 for a single point.
  double h() const { return n > 1 ? (x_max - x_min) / static_cast<double>(n - 1) : 0.0; }
  /// Rounded once from extended precision, so every node is within half an
  /// ulp of the exact uniform grid (x_min + i h accumulates ulp(x_min) noise,
  /// which second differences amplify by 1/h^2).
  double x(std::size_t i) const {
    if (n <= 1) return x_min;
    const long double lo = x_min, hi = x_max;
    return static_cast<double>(lo + static_cast<long double>(i) * (hi - lo) / static_cast<long double>(n - 1));
  }
  /// n >= 1, finite bounds, x_max > x_min when n > 1 (x_max == x_min when n == 1).
  void validate() const;
  /// Grid on [x_min, x_max] whose spacing is the closest to h from below.
  static SpaceGrid with_spacing(double x_min, double x_max, double h);
};

struct FieldState {
  SpaceGrid grid;
  double t = 0.0;
  std::vector<double> u, v, w;

  std::vector<double>& component(std::size_t k) { return k == 0 ? u : (k == 1 ? v : w); }
  const std::vector<double>& component(std::size_t k) const { return k == 0 ? u : (k == 1 ? v : w); }
  Densities at(std::size_t i) const { return {u[i], v[i], w[i]}; }
};

/// u_t = D u_xx + R(u) in three components. Built from either coefficient set.
struct ReactionDiffusionSystem {
  std::array<double, 3> diffusivity{1.0, 1.0, 1.0};
  std::function<Densities(const Densities&)> reaction;

  static ReactionDiffusionSystem hgf(const Params& p);
  static ReactionDiffusionSystem original(const OriginalParams& p);
};

/// Pointwise evaluation; throws NumericalError naming the first non-finite point.
FieldState sample(const Solution& sol, const SpaceGrid& grid, double t);

/// Norms of one residual evaluation.
struct ResidualLevel {
  double h = 0.0;
  double dt = 0.0;
  std::array<double, 3> linf{};
  std::array<double, 3> l2{};
};

struct ResidualReport {
  std::array<double, 3> linf{};  ///< max |r_k| over interior points
  std::array<double, 3> l2{};    ///< sqrt(h sum r_k^2)
  double h = 0.0;
  double dt = 0.0;
  /// Observed order per component, filled by refinement_study. Infinity
  /// marks a degenerate fit (residual zero at all levels, or at all but one).
  std::optional<std::array<double, 3>> order;
  std::vector<ResidualLevel> levels;  ///< per-h norms of a refinement study, coarsest first
};

/// r_k = d_k D2x f_k - Dt f_k + C_k at interior points x_1..x_{n-2}, all
/// stencils second-order central. dt defaults to h. Requires n >= 5.
ResidualReport pde_residual(const ReactionDiffusionSystem& sys, const Solution& sol, const SpaceGrid& grid, double t,
                            std::optional<double> dt = std::nullopt);
ResidualReport pde_residual(const Params& p, const Solution& sol, const SpaceGrid& grid, double t,
                            std::optional<double> dt = std::nullopt);

/// Residual evaluated on a field already sampled at t - dt, t, t + dt.
ResidualReport pde_residual_from_fields(const ReactionDiffusionSystem& sys, const FieldState& before,
                                        const FieldState& now, const FieldState& after);

/// Space window at a fixed time.
struct Window {
  double x_min = -1.0;
  double x_max = 1.0;
  double t = 0.0;
};

/// Residuals at each h (strictly decreasing, at least three), dt = dt_ratio h.
/// The top-level norms are those of the finest level; order is the
/// least-squares slope of log linf against log h.
ResidualReport refinement_study(const ReactionDiffusionSystem& sys, const Solution& sol, const Window& window,
                                const std::vector<double>& h_sequence, double dt_ratio = 1.0);
ResidualReport refinement_study(const Params& p, const Solution& sol, const Window& window,
                                const std::vector<double>& h_sequence, double dt_ratio = 1.0);

/// Least-squares slope of log(values) against log(h); infinity when fewer than
/// two values are positive.
double fitted_order(const std::vector<double>& h, const std::vector<double>& values);

/// Every masked component has order within target +- tol, or the infinity sentinel.
bool order_within(const ResidualReport& report, double target = 2.0, double tol = 0.2,
                  std::array<bool, 3> mask = {true, true, true});

/// Leading truncation term of the residual stencils for an exact solution:
/// d_k h^2/12 max|f_xxxx| + dt^2/6 max|f_ttt|, derivatives estimated with a
/// coarse auxiliary spacing.
std::array<double, 3> truncation_estimate(const ReactionDiffusionSystem& sys, const Solution& sol,
                                          const SpaceGrid& grid, double t, double dt);

/// Profile equation of the form F(z, P, P', P'') = 0 with m scalar unknowns.
/// First-order systems ignore the second-derivative argument.
struct ProfileEquation {
  std::size_t components = 1;
  int order = 2;
  std::function<std::vector<double>(double z, const std::vector<double>& p, const std::vector<double>& dp,
                                    const std::vector<double>& d2p)>
      residual;
};

using ProfileSampler = std::function<std::vector<double>(double z)>;

struct OdeResidualReport {
  std::vector<double> linf;
  std::vector<double> l2;
  double h = 0.0;
  std::optional<std::vector<double>> order;
  std::vector<std::vector<double>> level_linf;  ///< per-h linf, coarsest first
};

/// Residual of a profile sampler at interior points of [lo, hi] with central
/// differences of spacing close to h.
OdeResidualReport ode_residual(const ProfileEquation& eq, const ProfileSampler& profile, double lo, double hi,
                               double h);

/// ode_residual over a strictly decreasing h sequence with fitted orders.
OdeResidualReport ode_refinement(const ProfileEquation& eq, const ProfileSampler& profile, double lo, double hi,
                                 const std::vector<double>& h_sequence);

}  // namespace hgf
