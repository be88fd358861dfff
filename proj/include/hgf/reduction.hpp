#pragma once

#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hgf/calculus.hpp"
#include "hgf/model.hpp"
#include "hgf/solutions.hpp"

namespace hgf {

enum class SystemId { R35, R38, R47, R58, T2a, T2b, T2c, T2d, L36, L52 };

std::string_view system_name(SystemId id);
std::optional<SystemId> parse_system_name(std::string_view name);

/// An ODE system obtained from an ansatz. Second-order systems are stored in
/// first-order form: state (P_1..P_m, P_1'..P_m').
struct ReducedSystem {
  SystemId id = SystemId::R58;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  /// Coefficients of the PDE the system comes from. R35/R47 read d3 as d.
  Params params;
  double kappa1 = 0.0;  ///< L36
  double kappa2 = 1.0;  ///< L36
  SemiCase l52_case = SemiCase::s50;  ///< L52: W from the 50 or 51 formula
  /// Set by semi_profile_system; lets trajectory_profiles add the closed parts.
  std::optional<SemiExactSpec> semi;

  /// Number of scalar profiles (3, or 1 for L36/L52).
  std::size_t profiles() const;
  /// 1 for T2c, T2d, R38 (independent variable t), 2 otherwise.
  int order() const;
  /// First-order state size.
  std::size_t dimension() const { return profiles() * static_cast<std::size_t>(order()); }
  /// Independent variable name: "t" or "omega".
  std::string_view variable() const { return order() == 1 ? "t" : "omega"; }

  /// Derivative of the first-order state. Throws ConstraintError on a
  /// dimension mismatch.
  std::vector<double> rhs(double z, const std::vector<double>& y) const;
  /// The reduced equations as residuals, for calculus::ode_residual.
  ProfileEquation profile_equation() const;
};

ReducedSystem make_r35(double alpha, double a1, double beta, double a3, double a4, double d);
ReducedSystem make_r38(double beta, double a1, double a3, double a4);
ReducedSystem make_r47(double alpha, double beta, double a3, double a4, double d);
ReducedSystem make_r58(double alpha, const Params& p);
/// Reduction rows T2a..T2d of the case 9 system. T2b fixes beta = -1/a1; T2d fixes beta = 0.
ReducedSystem make_t2(SystemId row, double alpha, double beta, double gamma, double a1, double a4);
ReducedSystem make_l36(double alpha, double a1, double beta, double kappa1, double kappa2);
/// L52 for the semi50 (W = (1 - a4) phi) or semi51 (W = 1 - phi) case.
ReducedSystem make_l52(double beta, SemiCase c, double a4 = 0.0);

struct IntegrateOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  ///< 0: chosen from the span
  std::size_t max_steps = 20'000'000;
};

/// Accepted nodes of an embedded Runge-Kutta integration, with dense output.
/// The default rule ("continuation") takes one 5th-order step from the node
/// on the integration-origin side, which reproduces the nodes and inherits
/// the local accuracy. Cubic Hermite interpolation is also provided; their
/// difference at step midpoints is the recorded interpolation error estimate.
class ProfileTrajectory {
 public:
  ProfileTrajectory() = default;
  ProfileTrajectory(ReducedSystem sys, double origin, std::vector<double> z, std::vector<std::vector<double>> y);

  const ReducedSystem& system() const { return sys_; }
  const std::vector<double>& nodes() const { return z_; }
  const std::vector<std::vector<double>>& states() const { return y_; }
  double lo() const { return z_.front(); }
  double hi() const { return z_.back(); }
  double origin() const { return origin_; }
  bool covers(double z) const { return !z_.empty() && z >= lo() && z <= hi(); }

  /// State at z by step continuation. Throws ConstraintError outside [lo, hi].
  std::vector<double> at(double z) const;
  std::vector<double> hermite(double z) const;
  /// max over segments of |continuation - hermite| at the midpoint.
  double interpolation_error_estimate() const { return interp_error_; }
  std::size_t steps() const { return z_.empty() ? 0 : z_.size() - 1; }

 private:
  std::size_t segment(double z) const;
  ReducedSystem sys_;
  double origin_ = 0.0;
  std::vector<double> z_;
  std::vector<std::vector<double>> y_;
  std::vector<std::vector<double>> f_;
  double interp_error_ = 0.0;
};

/// Single Dormand-Prince 5(4) step; returns the 5th-order solution and, if
/// err is given, the embedded error vector.
std::vector<double> dp45_step(const ReducedSystem& sys, double z, const std::vector<double>& y,
                              const std::vector<double>& f0, double h, std::vector<double>* err = nullptr);

/// Adaptive Dormand-Prince 5(4) with PI step control from (z0, y0) to z1.
/// Throws NumericalError on step-size underflow or non-finite states,
/// naming the reach point.
ProfileTrajectory integrate(const ReducedSystem& sys, const std::vector<double>& y0, double z0, double z1,
                            const IntegrateOptions& opts = {});

/// Integrates from z0 towards both lo and hi and merges the two branches.
ProfileTrajectory integrate_two_sided(const ReducedSystem& sys, const std::vector<double>& y0, double z0, double lo,
                                      double hi, const IntegrateOptions& opts = {});

/// Closed-form solution of R38 for the three linear V-W cases. Same inputs
/// and checks as make_fam40.
Densities closed_form_r38(const Fam40Spec& spec, double t);

enum class AnsatzId { A34, A37, A44, T2a, T2b, T2c, T2d, PlaneWave };

std::string_view ansatz_name(AnsatzId id);
std::optional<AnsatzId> parse_ansatz_name(std::string_view name);

/// Reconstruction of (u, v, w) from profiles (U, V, W).
struct Ansatz {
  AnsatzId id = AnsatzId::PlaneWave;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double a1 = 0.0;
  double a4 = 0.0;

  /// true when the profiles depend on omega = x - alpha t, false for t.
  bool traveling() const;
  double variable(double t, double x) const { return traveling() ? x - alpha * t : t; }
  Densities reconstruct(const Densities& profiles, double t, double x) const;
};

/// The ansatz paired with a reduced system, with its coefficients.
Ansatz ansatz_for(const ReducedSystem& sys);

/// Profiles (U, V, W) as functions of the ansatz variable.
using TripleProfile = std::function<Densities(double z)>;

Solution reconstruct_solution(const Ansatz& ansatz, TripleProfile profiles);

/// (U, V, W) from a trajectory. L36/L52 trajectories are completed with the
/// closed-form parts of their semi-exact case.
TripleProfile trajectory_profiles(const ProfileTrajectory& traj);

/// PDE residual refinement of the reconstructed field at window.t.
ResidualReport verify_reduction(const ReducedSystem& sys, const Ansatz& ansatz, const Params& params,
                                TripleProfile profiles, const Window& window, const std::vector<double>& h_sequence);

/// Solves the linear profile equation of a semi-exact case on [lo, hi],
/// starting from (P, P') = initial at omega = start (default 0, clamped into
/// the range). Starting at lo integrates forward only, which is the stable
/// direction for the traveling-frame equations (one characteristic root at
/// -infinity is close to -alpha, so backward integration amplifies it).
ProfileTrajectory solve_semi_profile(const SemiExactSpec& spec, double lo, double hi,
                                     std::pair<double, double> initial = {1.0, 0.0}, IntegrateOptions opts = {},
                                     std::optional<double> start = std::nullopt);

/// The system of a semi-exact case's linear profile equation.
ReducedSystem semi_profile_system(const SemiExactSpec& spec);

/// First component of a trajectory as a ScalarProfile for make_semi_exact.
ScalarProfile scalar_profile(const ProfileTrajectory& traj);

}  // namespace hgf
