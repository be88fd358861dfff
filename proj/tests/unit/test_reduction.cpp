#include <cmath>

#include "doctest.h"
#include "hgf/error.hpp"
#include "hgf/reduction.hpp"

using namespace hgf;

namespace {
double coefficient(const FamilyInstance& f, const std::string& name) {
  for (const auto& [k, v] : f.coefficients)
    if (k == name) return v;
  FAIL("missing coefficient " << name);
  return 0.0;
}
}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("system names round-trip") {
    for (SystemId id : {SystemId::R35, SystemId::R38, SystemId::R47, SystemId::R58, SystemId::T2a, SystemId::T2b,
                        SystemId::T2c, SystemId::T2d, SystemId::L36, SystemId::L52})
      CHECK(parse_system_name(system_name(id)) == id);
    CHECK_FALSE(parse_system_name("R99"));
  }

  TEST_CASE("R38 integration matches the closed form") {
    const Fam40Spec s;
    const FamilyInstance f = make_fam40(s);
    const ReducedSystem sys = make_r38(coefficient(f, "beta"), s.a1, coefficient(f, "a3"), coefficient(f, "a4"));
    CHECK(sys.dimension() == 3);
    CHECK(sys.variable() == "t");
    const Densities y0 = closed_form_r38(s, 0.0);
    IntegrateOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    const ProfileTrajectory traj = integrate(sys, {y0.u, y0.v, y0.w}, 0.0, 3.0, opts);
    for (double t : {0.5, 1.7, 3.0}) {
      const auto y = traj.at(t);
      const Densities ref = closed_form_r38(s, t);
      CHECK(max_abs(Densities{y[0], y[1], y[2]} - ref) < 1e-8);
    }
    CHECK(traj.interpolation_error_estimate() < 1e-6);
    CHECK_THROWS_AS(traj.at(3.5), ConstraintError);
  }

  TEST_CASE("Dormand-Prince step is fifth order") {
    const Fam40Spec s;
    const FamilyInstance f = make_fam40(s);
    const ReducedSystem sys = make_r38(coefficient(f, "beta"), s.a1, coefficient(f, "a3"), coefficient(f, "a4"));
    const Densities y0 = closed_form_r38(s, 0.0);
    const std::vector<double> y{y0.u, y0.v, y0.w};
    const auto f0 = sys.rhs(0.0, y);
    auto err = [&](double h) {
      const auto y1 = dp45_step(sys, 0.0, y, f0, h);
      const Densities ref = closed_form_r38(s, h);
      return max_abs(Densities{y1[0], y1[1], y1[2]} - ref);
    };
    // Local error O(h^6) or better: halving h divides it by at least about 64.
    const double ratio = err(0.05) / err(0.025);
    CHECK(ratio > 50.0);
  }

  TEST_CASE("rhs checks the state size") {
    const ReducedSystem sys = make_r38(-1.0, 0.1, 1.0, 0.5);
    CHECK_THROWS_AS(sys.rhs(0.0, {1.0, 2.0}), ConstraintError);
  }

  TEST_CASE("R38 reconstruction satisfies the PDE") {
    const Fam40Spec s;
    const FamilyInstance f = make_fam40(s);
    const ReducedSystem sys = make_r38(coefficient(f, "beta"), s.a1, coefficient(f, "a3"), coefficient(f, "a4"));
    const Densities y0 = closed_form_r38(s, 0.0);
    IntegrateOptions opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-14;
    const ProfileTrajectory traj = integrate(sys, {y0.u, y0.v, y0.w}, 0.0, 2.0, opts);
    const Ansatz a = ansatz_for(sys);
    CHECK_FALSE(a.traveling());
    const ResidualReport r =
        verify_reduction(sys, a, sys.params, trajectory_profiles(traj), Window{0.0, 10.0, 1.0}, {4e-3, 2e-3, 1e-3});
    CHECK(order_within(r));
  }

  TEST_CASE("semi-exact profile solved forward is accepted") {
    SemiExactSpec spec;
    spec.a1 = 0.5;
    IntegrateOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    opts.max_step = 0.01;
    const auto traj = solve_semi_profile(spec, -5.0, 5.0, {1.0, 0.0}, opts, -5.0);
    CHECK(traj.lo() == -5.0);
    CHECK(traj.hi() == doctest::Approx(5.0));
    const FamilyInstance f = make_semi_exact(spec, scalar_profile(traj));
    CHECK(std::isfinite(f.evaluate(0.0, 0.0).u));
  }
}
