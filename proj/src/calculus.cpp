#include "hgf/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hgf/error.hpp"
#include "hgf/parallel.hpp"

namespace hgf {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void SpaceGrid::validate() const {
  if (n < 1) throw ConstraintError("grid: n must be at least 1");
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) throw ConstraintError("grid: bounds must be finite");
  if (n == 1 && x_max != x_min) throw ConstraintError("grid: a single-point grid needs x_min == x_max");
  if (n > 1 && !(x_max > x_min)) throw ConstraintError("grid: x_max must exceed x_min");
}

SpaceGrid SpaceGrid::with_spacing(double x_min, double x_max, double h) {
  if (!(h > 0) || !std::isfinite(h)) throw ConstraintError("grid: spacing must be positive");
  if (!(x_max > x_min)) throw ConstraintError("grid: x_max must exceed x_min");
  const double cells = std::ceil((x_max - x_min) / h - 1e-9);
  return SpaceGrid{x_min, x_max, static_cast<std::size_t>(std::max(1.0, cells)) + 1};
}

ReactionDiffusionSystem ReactionDiffusionSystem::hgf(const Params& p) {
  p.validate();
  return {p.diffusivities(), [p](const Densities& s) { return kinetics(p, s); }};
}

ReactionDiffusionSystem ReactionDiffusionSystem::original(const OriginalParams& p) {
  p.validate();
  return {{p.d_f, p.d_c, p.d_h}, [p](const Densities& s) { return original_kinetics(p, s); }};
}

FieldState sample(const Solution& sol, const SpaceGrid& grid, double t) {
  grid.validate();
  FieldState f;
  f.grid = grid;
  f.t = t;
  f.u.resize(grid.n);
  f.v.resize(grid.n);
  f.w.resize(grid.n);
  parallel_for(grid.n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Densities s = sol(t, grid.x(i));
      f.u[i] = s.u;
      f.v[i] = s.v;
      f.w[i] = s.w;
    }
  });
  for (std::size_t i = 0; i < grid.n; ++i) {
    if (!std::isfinite(f.u[i]) || !std::isfinite(f.v[i]) || !std::isfinite(f.w[i]))
      throw NumericalError("non-finite sample at t = " + fmt(t) + ", x = " + fmt(grid.x(i)) + " (index " +
                           std::to_string(i) + ")");
  }
  return f;
}

ResidualReport pde_residual_from_fields(const ReactionDiffusionSystem& sys, const FieldState& before,
                                        const FieldState& now, const FieldState& after) {
  const SpaceGrid& g = now.grid;
  if (g.n < 5) throw ConstraintError("residual: grid needs n >= 5 points");
  const double h = g.h();
  const double dt = 0.5 * (after.t - before.t);
  if (!(dt > 0)) throw ConstraintError("residual: time step must be positive");
  const std::size_t m = g.n - 2;
  std::array<std::vector<double>, 3> r;
  for (auto& c : r) c.resize(m);
  parallel_for(m, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const std::size_t i = j + 1;
      const Densities c = sys.reaction(now.at(i));
      for (std::size_t k = 0; k < 3; ++k) {
        const auto& f = now.component(k);
        const double lap = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        const double ft = (after.component(k)[i] - before.component(k)[i]) / (2.0 * dt);
        r[k][j] = sys.diffusivity[k] * lap - ft + c[k];
      }
    }
  });
  ResidualReport rep;
  rep.h = h;
  rep.dt = dt;
  // Fixed left-to-right fold for reproducibility.
  for (std::size_t k = 0; k < 3; ++k) {
    double mx = 0.0, sq = 0.0;
    for (double x : r[k]) {
      if (!std::isfinite(x)) throw NumericalError("residual: non-finite value");
      mx = std::max(mx, std::abs(x));
      sq += x * x;
    }
    rep.linf[k] = mx;
    rep.l2[k] = std::sqrt(h * sq);
  }
  return rep;
}

ResidualReport pde_residual(const ReactionDiffusionSystem& sys, const Solution& sol, const SpaceGrid& grid, double t,
                            std::optional<double> dt) {
  grid.validate();
  if (grid.n < 5) throw ConstraintError("residual: grid needs n >= 5 points");
  const double step = dt.value_or(grid.h());
  if (!(step > 0) || !std::isfinite(step)) throw ConstraintError("residual: dt must be positive");
  const FieldState now = sample(sol, grid, t);
  const FieldState before = sample(sol, grid, t - step);
  const FieldState after = sample(sol, grid, t + step);
  ResidualReport rep = pde_residual_from_fields(sys, before, now, after);
  rep.dt = step;
  return rep;
}

ResidualReport pde_residual(const Params& p, const Solution& sol, const SpaceGrid& grid, double t,
                            std::optional<double> dt) {
  return pde_residual(ReactionDiffusionSystem::hgf(p), sol, grid, t, dt);
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& values) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size() && i < values.size(); ++i) {
    if (values[i] > 0) {
      lx.push_back(std::log(h[i]));
      ly.push_back(std::log(values[i]));
    }
  }
  if (lx.size() < 2) return kInf;
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

namespace {

void check_sequence(const std::vector<double>& hs) {
  if (hs.size() < 3) throw ConstraintError("refinement: need at least three spacings");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0)) throw ConstraintError("refinement: spacings must be positive");
    if (i > 0 && !(hs[i] < hs[i - 1])) throw ConstraintError("refinement: spacings must be strictly decreasing");
  }
}

}  // namespace

ResidualReport refinement_study(const ReactionDiffusionSystem& sys, const Solution& sol, const Window& window,
                                const std::vector<double>& h_sequence, double dt_ratio) {
  check_sequence(h_sequence);
  if (!(dt_ratio > 0)) throw ConstraintError("refinement: dt ratio must be positive");
  ResidualReport out;
  std::vector<double> hs;
  std::array<std::vector<double>, 3> norms;
  for (double h : h_sequence) {
    const SpaceGrid g = SpaceGrid::with_spacing(window.x_min, window.x_max, h);
    const ResidualReport r = pde_residual(sys, sol, g, window.t, dt_ratio * g.h());
    out.levels.push_back({r.h, r.dt, r.linf, r.l2});
    hs.push_back(r.h);
    for (std::size_t k = 0; k < 3; ++k) norms[k].push_back(r.linf[k]);
    out.linf = r.linf;
    out.l2 = r.l2;
    out.h = r.h;
    out.dt = r.dt;
  }
  std::array<double, 3> order{};
  for (std::size_t k = 0; k < 3; ++k) order[k] = fitted_order(hs, norms[k]);
  out.order = order;
  return out;
}

ResidualReport refinement_study(const Params& p, const Solution& sol, const Window& window,
                                const std::vector<double>& h_sequence, double dt_ratio) {
  return refinement_study(ReactionDiffusionSystem::hgf(p), sol, window, h_sequence, dt_ratio);
}

bool order_within(const ResidualReport& report, double target, double tol, std::array<bool, 3> mask) {
  if (!report.order) return false;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!mask[k]) continue;
    const double o = (*report.order)[k];
    if (std::isinf(o)) continue;
    if (!(std::abs(o - target) <= tol)) return false;
  }
  return true;
}

std::array<double, 3> truncation_estimate(const ReactionDiffusionSystem& sys, const Solution& sol,
                                          const SpaceGrid& grid, double t, double dt) {
  grid.validate();
  const double h = grid.h();
  const double H = std::max(4.0 * h, 0.02);
  const double T = std::max(4.0 * dt, 0.02);
  const std::size_t stride = std::max<std::size_t>(1, grid.n / 2000);
  std::array<double, 3> d4{}, d3{};
  for (std::size_t i = 1; i + 1 < grid.n; i += stride) {
    const double x = grid.x(i);
    const Densities f0 = sol(t, x);
    const Densities xp1 = sol(t, x + H), xm1 = sol(t, x - H), xp2 = sol(t, x + 2 * H), xm2 = sol(t, x - 2 * H);
    const Densities tp1 = sol(t + T, x), tm1 = sol(t - T, x), tp2 = sol(t + 2 * T, x), tm2 = sol(t - 2 * T, x);
    for (std::size_t k = 0; k < 3; ++k) {
      const double fx4 = (xp2[k] - 4 * xp1[k] + 6 * f0[k] - 4 * xm1[k] + xm2[k]) / (H * H * H * H);
      const double ft3 = (tp2[k] - 2 * tp1[k] + 2 * tm1[k] - tm2[k]) / (2 * T * T * T);
      if (std::isfinite(fx4)) d4[k] = std::max(d4[k], std::abs(fx4));
      if (std::isfinite(ft3)) d3[k] = std::max(d3[k], std::abs(ft3));
    }
  }
  std::array<double, 3> est{};
  for (std::size_t k = 0; k < 3; ++k)
    est[k] = sys.diffusivity[k] * h * h / 12.0 * d4[k] + dt * dt / 6.0 * d3[k];
  return est;
}

OdeResidualReport ode_residual(const ProfileEquation& eq, const ProfileSampler& profile, double lo, double hi,
                               double h) {
  if (!eq.residual) throw ConstraintError("ode residual: missing equation");
  const SpaceGrid g = SpaceGrid::with_spacing(lo, hi, h);
  if (g.n < 5) throw ConstraintError("ode residual: window needs at least five points");
  const double hh = g.h();
  const std::size_t m = eq.components;
  std::vector<std::vector<double>> vals(g.n);
  parallel_for(g.n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) vals[i] = profile(g.x(i));
  }, 1024);
  for (std::size_t i = 0; i < g.n; ++i) {
    if (vals[i].size() != m) throw ConstraintError("ode residual: profile dimension mismatch");
    for (double x : vals[i])
      if (!std::isfinite(x)) throw NumericalError("ode residual: non-finite profile at z = " + fmt(g.x(i)));
  }
  std::vector<std::vector<double>> res(g.n - 2);
  parallel_for(g.n - 2, [&](std::size_t b, std::size_t e) {
    std::vector<double> dp(m), d2p(m);
    for (std::size_t j = b; j < e; ++j) {
      const std::size_t i = j + 1;
      for (std::size_t c = 0; c < m; ++c) {
        dp[c] = (vals[i + 1][c] - vals[i - 1][c]) / (2 * hh);
        d2p[c] = (vals[i + 1][c] - 2 * vals[i][c] + vals[i - 1][c]) / (hh * hh);
      }
      res[j] = eq.residual(g.x(i), vals[i], dp, d2p);
    }
  }, 1024);
  OdeResidualReport rep;
  rep.h = hh;
  const std::size_t rm = res.empty() ? 0 : res.front().size();
  rep.linf.assign(rm, 0.0);
  rep.l2.assign(rm, 0.0);
  for (const auto& r : res) {
    for (std::size_t c = 0; c < rm; ++c) {
      rep.linf[c] = std::max(rep.linf[c], std::abs(r[c]));
      rep.l2[c] += r[c] * r[c];
    }
  }
  for (auto& x : rep.l2) x = std::sqrt(hh * x);
  return rep;
}

OdeResidualReport ode_refinement(const ProfileEquation& eq, const ProfileSampler& profile, double lo, double hi,
                                 const std::vector<double>& h_sequence) {
  check_sequence(h_sequence);
  OdeResidualReport out;
  std::vector<double> hs;
  for (double h : h_sequence) {
    OdeResidualReport r = ode_residual(eq, profile, lo, hi, h);
    hs.push_back(r.h);
    out.level_linf.push_back(r.linf);
    out.linf = r.linf;
    out.l2 = r.l2;
    out.h = r.h;
  }
  std::vector<double> order(out.linf.size());
  for (std::size_t c = 0; c < order.size(); ++c) {
    std::vector<double> col;
    for (const auto& l : out.level_linf) col.push_back(l[c]);
    order[c] = fitted_order(hs, col);
  }
  out.order = order;
  return out;
}

}  // namespace hgf
