#include "doctest.h"
#include "hgf/error.hpp"
#include "hgf/model.hpp"

using namespace hgf;

namespace {
const Params kGeneric{0.3, 0.7, 1.2, 0.4, 0.9, 1.0, 2.0, 3.0};
}

TEST_SUITE("model") {
  TEST_CASE("kinetics at a hand-computed point") {
    // (u, v, w) = (0.2, 0.5, 0.6): 1 - u - a1 v = 0.65.
    const Densities c = kinetics(kGeneric, {0.2, 0.5, 0.6});
    CHECK(c.u == doctest::Approx(0.13).epsilon(1e-14));
    CHECK(c.v == doctest::Approx(0.2275 + 0.12 + 0.09).epsilon(1e-14));
    CHECK(c.w == doctest::Approx(0.288 - 0.048 - 0.27).epsilon(1e-14));
  }

  TEST_CASE("steady states are kinetics zeros") {
    const auto all = steady_states(kGeneric);
    REQUIRE_FALSE(all.empty());
    for (const auto& s : all) {
      CHECK(is_steady_state(kGeneric, s.point));
      for (const auto& d : s.directions) CHECK(is_steady_state(kGeneric, s.point + 0.7 * d, 1e-11));
    }
    bool extinct = false, hunters = false;
    for (const auto& s : all) {
      extinct = extinct || s.contains({0, 0, 0});
      hunters = hunters || s.contains({0, 0, 1});
    }
    CHECK(extinct);
    CHECK(hunters);
  }

  TEST_CASE("coefficient validation") {
    Params p = kGeneric;
    CHECK_NOTHROW(p.validate());
    p.d1 = 0.0;
    CHECK_THROWS_AS(p.validate(), ConstraintError);
    p = kGeneric;
    p.a4 = 0.0;
    CHECK_THROWS_AS(p.validate(), ConstraintError);
    p = kGeneric;
    p.a5 = -1.0;
    CHECK_NOTHROW(p.validate());
    CHECK_THROWS_AS(p.validate_biological(), ConstraintError);
  }

  TEST_CASE("first diffusivity normalization divides all diffusivities") {
    Params p = kGeneric;
    p.d1 = 2.0;
    p.d2 = 4.0;
    p.d3 = 6.0;
    const Params q = normalize_first_diffusivity(p);
    CHECK(q.d1 == 1.0);
    CHECK(q.d2 == 2.0);
    CHECK(q.d3 == 3.0);
    CHECK(q.a1 == p.a1);
    CHECK(p.max_diffusivity() == 6.0);
  }

  TEST_CASE("reflection") {
    const Solution s = [](double t, double x) { return Densities{t + x, x, 0.0}; };
    const Densities r = reflect_solution(s)(1.0, 2.0);
    CHECK(r.u == -1.0);
    CHECK(r.v == -2.0);
  }

  TEST_CASE("dimensional coefficients are validated") {
    OriginalParams o;
    CHECK_NOTHROW(o.validate());
    o.K = 0.0;
    CHECK_THROWS_AS(o.validate(), ConstraintError);
  }
}
