#include "hgf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hgf/parallel.hpp"

namespace hgf {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string component_name(Component c) {
  switch (c) {
    case Component::u: return "u";
    case Component::v: return "v";
    case Component::w: return "w";
  }
  return "?";
}

// State stored as three contiguous component arrays.
using State = std::array<std::vector<double>, 3>;

}  // namespace

void SimConfig::validate() const {
  params.validate();
  grid.validate();
  if (grid.n < 3) throw ConstraintError("simulate: grid needs at least 3 points");
  if (!(cfl_safety > 0 && cfl_safety <= 1)) throw ConstraintError("simulate: cfl_safety must lie in (0, 1]");
  if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t_end > t0))
    throw ConstraintError("simulate: t_end must exceed t0");
  if (snapshot_every == 0) throw ConstraintError("simulate: snapshot_every must be positive");
  if (const auto* f = std::get_if<FieldState>(&initial)) {
    if (f->u.size() != grid.n || f->v.size() != grid.n || f->w.size() != grid.n)
      throw ConstraintError("simulate: initial arrays must have " + std::to_string(grid.n) + " entries");
  } else if (!std::get<Solution>(initial)) {
    throw ConstraintError("simulate: no initial data");
  }
  if (const auto* p = std::get_if<PinnedToExactBc>(&bc); p && !p->exact)
    throw ConstraintError("simulate: pinned boundary needs a solution");
}

double stability_bound(const Params& p, const SpaceGrid& grid, double cfl_safety) {
  grid.validate();
  if (!(cfl_safety > 0 && cfl_safety <= 1)) throw ConstraintError("stability bound: cfl_safety must lie in (0, 1]");
  const double h = grid.h();
  if (!(h > 0)) throw ConstraintError("stability bound: grid spacing must be positive");
  return cfl_safety * h * h / (2.0 * p.max_diffusivity());
}

namespace {

class Stepper {
 public:
  explicit Stepper(const SimConfig& c) : c_(c), n_(c.grid.n), h_(c.grid.h()) {}

  // Boundary values at time t, for the Dirichlet and pinned conditions.
  void set_boundary(double t, State& y) const {
    if (const auto* d = std::get_if<DirichletBc>(&c_.bc)) {
      for (std::size_t k = 0; k < 3; ++k) {
        y[k][0] = d->left[k];
        y[k][n_ - 1] = d->right[k];
      }
    } else if (const auto* p = std::get_if<PinnedToExactBc>(&c_.bc)) {
      const Densities l = p->exact(t, c_.grid.x_min), r = p->exact(t, c_.grid.x(n_ - 1));
      for (std::size_t k = 0; k < 3; ++k) {
        y[k][0] = l[k];
        y[k][n_ - 1] = r[k];
      }
    }
  }

  // Right-hand side; boundary rows are zero unless the boundary is Neumann.
  void rhs(const State& y, State& out) const {
    const auto d = c_.params.diffusivities();
    const bool neumann = std::holds_alternative<NeumannZeroBc>(c_.bc);
    const double ih2 = 1.0 / (h_ * h_);
    parallel_for(n_, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const bool edge = i == 0 || i == n_ - 1;
        if (edge && !neumann) {
          for (std::size_t k = 0; k < 3; ++k) out[k][i] = 0.0;
          continue;
        }
        const Densities s{y[0][i], y[1][i], y[2][i]};
        const Densities r = kinetics(c_.params, s);
        for (std::size_t k = 0; k < 3; ++k) {
          const auto& f = y[k];
          // Mirror ghost points give zero flux at the ends.
          const double left = i == 0 ? f[1] : f[i - 1];
          const double right = i == n_ - 1 ? f[n_ - 2] : f[i + 1];
          out[k][i] = d[k] * (left - 2.0 * f[i] + right) * ih2 + r[k];
        }
      }
    });
  }

  void step(double t, double dt, State& y, State& k1, State& k2, State& k3, State& k4, State& tmp) const {
    const auto axpy = [&](const State& base, const State& k, double a, State& out, double t_stage) {
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < n_; ++i) out[c][i] = base[c][i] + a * k[c][i];
      set_boundary(t_stage, out);
    };
    rhs(y, k1);
    axpy(y, k1, 0.5 * dt, tmp, t + 0.5 * dt);
    rhs(tmp, k2);
    axpy(y, k2, 0.5 * dt, tmp, t + 0.5 * dt);
    rhs(tmp, k3);
    axpy(y, k3, dt, tmp, t + dt);
    rhs(tmp, k4);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < n_; ++i)
        y[c][i] += dt / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
    set_boundary(t + dt, y);
  }

 private:
  const SimConfig& c_;
  std::size_t n_;
  double h_;
};

FieldState to_field(const SpaceGrid& g, double t, const State& y) { return FieldState{g, t, y[0], y[1], y[2]}; }

}  // namespace

SimRun run(const SimConfig& config) {
  config.validate();
  SimRun out;
  out.config = config;
  const std::size_t n = config.grid.n;
  const double span = config.t_end - config.t0;
  const double bound = stability_bound(config.params, config.grid, config.cfl_safety);
  const auto steps = static_cast<std::size_t>(std::ceil(span / bound - 1e-12));
  out.steps = std::max<std::size_t>(1, steps);
  out.dt = span / static_cast<double>(out.steps);

  State y;
  if (const auto* f = std::get_if<FieldState>(&config.initial)) {
    y = {f->u, f->v, f->w};
  } else {
    const FieldState f0 = sample(std::get<Solution>(config.initial), config.grid, config.t0);
    y = {f0.u, f0.v, f0.w};
  }
  for (const auto& c : y)
    for (double v : c)
      if (!std::isfinite(v)) throw ConstraintError("simulate: initial data must be finite");

  Stepper stepper(config);
  stepper.set_boundary(config.t0, y);
  out.snapshots.push_back(to_field(config.grid, config.t0, y));

  State k1, k2, k3, k4, tmp;
  for (auto* s : {&k1, &k2, &k3, &k4, &tmp})
    for (auto& c : *s) c.assign(n, 0.0);

  for (std::size_t s = 1; s <= out.steps; ++s) {
    const double t = config.t0 + static_cast<double>(s - 1) * out.dt;
    stepper.step(t, out.dt, y, k1, k2, k3, k4, tmp);
    out.rhs_evaluations += 4;
    bool finite = true;
    for (const auto& c : y)
      for (double v : c)
        if (!std::isfinite(v)) finite = false;
    const double t_new = s == out.steps ? config.t_end : config.t0 + static_cast<double>(s) * out.dt;
    if (!finite) {
      auto partial = std::make_shared<SimRun>(out);
      partial->steps = s - 1;
      throw BlowUpError("simulate: non-finite state at step " + std::to_string(s) + " (t = " + fmt(t_new) +
                            "); last good snapshot at t = " + fmt(out.snapshots.back().t),
                        partial, s);
    }
    if (s % config.snapshot_every == 0 || s == out.steps) out.snapshots.push_back(to_field(config.grid, t_new, y));
  }
  return out;
}

double level_crossing(const FieldState& state, Component component, double level) {
  const auto& c = state.component(static_cast<std::size_t>(component));
  const std::size_t n = c.size();
  std::optional<double> found;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // A node exactly at the level counts as above it.
    const double a = c[i] - level, b = c[i + 1] - level;
    if ((a < 0) != (b < 0)) {
      ++count;
      const double x0 = state.grid.x(i), x1 = state.grid.x(i + 1);
      found = x0 + (x1 - x0) * a / (a - b);
    }
  }
  if (count == 0)
    throw NumericalError("speed: no crossing of level " + fmt(level) + " by " + component_name(component) +
                         " at t = " + fmt(state.t));
  if (count > 1)
    throw NumericalError("speed: " + std::to_string(count) + " crossings of level " + fmt(level) + " by " +
                         component_name(component) + " at t = " + fmt(state.t) + " (profile not monotone)");
  return *found;
}

SpeedEstimate measure_front_speed(const std::vector<FieldState>& snapshots, Component component, double level,
                                  std::optional<std::pair<double, double>> fit_window) {
  if (snapshots.size() < 2) throw NumericalError("speed: need at least two snapshots");
  SpeedEstimate est;
  est.component = component;
  est.level = level;
  const double t_first = snapshots.front().t, t_last = snapshots.back().t;
  est.fit_window = fit_window.value_or(std::make_pair(t_first + 0.5 * (t_last - t_first), t_last));
  for (const auto& s : snapshots) {
    if (s.t < est.fit_window.first || s.t > est.fit_window.second) continue;
    est.trace.emplace_back(s.t, level_crossing(s, component, level));
  }
  if (est.trace.size() < 2) throw NumericalError("speed: fewer than two snapshots inside the fit window");
  const double m = static_cast<double>(est.trace.size());
  double mt = 0, mx = 0;
  for (const auto& [t, x] : est.trace) {
    mt += t;
    mx += x;
  }
  mt /= m;
  mx /= m;
  double stt = 0, stx = 0, sxx = 0;
  for (const auto& [t, x] : est.trace) {
    stt += (t - mt) * (t - mt);
    stx += (t - mt) * (x - mx);
    sxx += (x - mx) * (x - mx);
  }
  if (!(stt > 0)) throw NumericalError("speed: fit window holds a single time");
  est.speed = stx / stt;
  est.intercept = mx - est.speed * mt;
  double ssr = 0;
  for (const auto& [t, x] : est.trace) {
    const double r = x - (est.intercept + est.speed * t);
    ssr += r * r;
  }
  est.r_squared = sxx > 0 ? std::clamp(1.0 - ssr / sxx, 0.0, 1.0) : 1.0;
  est.reliable = est.r_squared >= 0.999;
  return est;
}

SpeedEstimate measure_front_speed(const SimRun& run, Component component, double level,
                                  std::optional<std::pair<double, double>> fit_window) {
  return measure_front_speed(run.snapshots, component, level, fit_window);
}

}  // namespace hgf
