#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "hgf/calculus.hpp"
#include "hgf/error.hpp"
#include "hgf/model.hpp"

namespace hgf {

struct DirichletBc {
  Densities left;
  Densities right;
};
struct NeumannZeroBc {};
/// Boundary nodes follow a known solution at every stage time.
struct PinnedToExactBc {
  Solution exact;
};
using BoundaryCondition = std::variant<DirichletBc, NeumannZeroBc, PinnedToExactBc>;

struct SimConfig {
  Params params;
  SpaceGrid grid{-40.0, 60.0, 2001};
  double t0 = 0.0;
  double t_end = 10.0;
  double cfl_safety = 0.4;
  BoundaryCondition bc = NeumannZeroBc{};
  std::size_t snapshot_every = 200;
  /// Sampled at t0, or explicit arrays on grid.
  std::variant<Solution, FieldState> initial;

  void validate() const;
};

struct SimRun {
  SimConfig config;
  std::vector<FieldState> snapshots;  ///< t0, every snapshot_every steps, and the final step
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t rhs_evaluations = 0;
};

/// Thrown when the state stops being finite; carries the run up to the last
/// good snapshot.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, std::shared_ptr<const SimRun> partial, std::size_t step)
      : NumericalError(what), partial_(std::move(partial)), step_(step) {}
  const SimRun& partial() const { return *partial_; }
  std::size_t step() const { return step_; }

 private:
  std::shared_ptr<const SimRun> partial_;
  std::size_t step_;
};

/// dt = cfl_safety h^2 / (2 max d), a sufficient bound for explicit stepping
/// of the diffusive part. cfl_safety must lie in (0, 1].
double stability_bound(const Params& p, const SpaceGrid& grid, double cfl_safety);

/// Method of lines: second-order central Laplacian plus kinetics, classic
/// RK4 with dt = (t_end - t0)/ceil((t_end - t0)/stability_bound).
SimRun run(const SimConfig& config);

struct SpeedEstimate {
  Component component = Component::u;
  double level = 0.0;
  double speed = 0.0;
  double intercept = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double r_squared = 0.0;
  bool reliable = false;  ///< r_squared >= 0.999
  std::vector<std::pair<double, double>> trace;  ///< (t, x_cross) of the fitted snapshots
};

/// Level crossing of one snapshot by linear interpolation. Throws
/// NumericalError when there is no crossing or more than one.
double level_crossing(const FieldState& state, Component component, double level);

/// Least-squares slope of the crossing position against t over fit_window
/// (default: the last half of the snapshot time range).
SpeedEstimate measure_front_speed(const std::vector<FieldState>& snapshots, Component component, double level,
                                  std::optional<std::pair<double, double>> fit_window = std::nullopt);
SpeedEstimate measure_front_speed(const SimRun& run, Component component, double level,
                                  std::optional<std::pair<double, double>> fit_window = std::nullopt);

}  // namespace hgf
