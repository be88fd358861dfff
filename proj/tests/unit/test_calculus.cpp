#include <cmath>

#include "doctest.h"
#include "hgf/calculus.hpp"
#include "hgf/error.hpp"

using namespace hgf;

namespace {
// Zero reaction: solutions of three decoupled heat equations.
ReactionDiffusionSystem heat_system() {
  ReactionDiffusionSystem s;
  s.diffusivity = {1.0, 2.0, 0.5};
  s.reaction = [](const Densities&) { return Densities{}; };
  return s;
}

Densities heat_solution(double t, double x) {
  return {std::exp(-t) * std::sin(x), std::exp(-2.0 * t) * std::cos(x), std::exp(-2.0 * t) * std::sin(2.0 * x)};
}
}  // namespace

TEST_SUITE("calculus") {
  TEST_CASE("grid nodes hit both ends exactly") {
    const SpaceGrid g{-40.0, 60.0, 2001};
    CHECK(g.x(0) == -40.0);
    CHECK(g.x(2000) == 60.0);
    CHECK(g.x(1000) == 10.0);
    CHECK(g.h() == doctest::Approx(0.05));
    const SpaceGrid s = SpaceGrid::with_spacing(-1.0, 1.0, 0.5);
    CHECK(s.n == 5);
    CHECK_THROWS_AS((SpaceGrid{1.0, 0.0, 3}.validate()), ConstraintError);
  }

  TEST_CASE("fitted order of exact power laws") {
    const std::vector<double> h{4e-3, 2e-3, 1e-3};
    std::vector<double> e2, e1;
    for (double v : h) {
      e2.push_back(3.0 * v * v);
      e1.push_back(0.5 * v);
    }
    CHECK(fitted_order(h, e2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fitted_order(h, e1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(fitted_order(h, {0.0, 0.0, 0.0})));
  }

  TEST_CASE("residual of exact heat solutions is second order") {
    const Window w{-3.0, 3.0, 0.5};
    const ResidualReport r = refinement_study(heat_system(), heat_solution, w, {4e-3, 2e-3, 1e-3});
    REQUIRE(r.order);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK((*r.order)[k] == doctest::Approx(2.0).epsilon(0.05));
      CHECK(r.linf[k] < 1e-6);
    }
    CHECK(order_within(r));
  }

  TEST_CASE("a non-solution has a residual bounded away from zero") {
    const Solution wrong = [](double t, double x) { return Densities{t + x * x, 0.0, 0.0}; };
    // u_t - u_xx = 1 - 2 = -1 everywhere.
    const ResidualReport r = pde_residual(heat_system(), wrong, SpaceGrid{-1.0, 1.0, 101}, 0.0, 1e-2);
    CHECK(r.linf[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.linf[1] == 0.0);
  }

  TEST_CASE("residual from sampled fields matches the function form") {
    const SpaceGrid g{-2.0, 2.0, 201};
    const double t = 0.3, dt = 0.02;
    const ResidualReport a = pde_residual(heat_system(), heat_solution, g, t, dt);
    const ResidualReport b = pde_residual_from_fields(heat_system(), sample(heat_solution, g, t - dt),
                                                      sample(heat_solution, g, t), sample(heat_solution, g, t + dt));
    for (std::size_t k = 0; k < 3; ++k) CHECK(a.linf[k] == doctest::Approx(b.linf[k]).epsilon(1e-12));
  }

  TEST_CASE("sample rejects non-finite values") {
    const Solution bad = [](double, double x) { return Densities{1.0 / x, 0.0, 0.0}; };
    CHECK_THROWS_AS(sample(bad, SpaceGrid{-1.0, 1.0, 3}, 0.0), NumericalError);
  }

  TEST_CASE("ode residual of an exact profile") {
    // P'' + P = 0 with P = sin z.
    ProfileEquation eq;
    eq.residual = [](double, const std::vector<double>& p, const std::vector<double>&, const std::vector<double>& d2p) {
      return std::vector<double>{d2p[0] + p[0]};
    };
    const auto rep = ode_refinement(eq, [](double z) { return std::vector<double>{std::sin(z)}; }, 0.0, 3.0,
                                    {4e-3, 2e-3, 1e-3});
    REQUIRE(rep.order);
    CHECK((*rep.order)[0] == doctest::Approx(2.0).epsilon(0.05));
  }
}
