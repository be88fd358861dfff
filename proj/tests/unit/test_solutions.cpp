#include <cmath>

#include "doctest.h"
#include "hgf/error.hpp"
#include "hgf/solutions.hpp"

using namespace hgf;

TEST_SUITE("solutions") {
  TEST_CASE("Fisher front value, speed and profile") {
    const FamilyInstance f = fisher_tf();
    CHECK(f.evaluate(0.0, 0.0).u == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(fisher_speed() == doctest::Approx(5.0 / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(f.defined == std::array<bool, 3>{true, false, false});
    for (double x : {-7.0, -1.0, 0.5, 3.0}) {
      const double t = 0.4;
      const double z = (x - 5.0 / std::sqrt(6.0) * t) / (2.0 * std::sqrt(6.0));
      const double ref = 0.25 * std::pow(1.0 - std::tanh(z), 2);
      CHECK(f.evaluate(t, x).u == doctest::Approx(ref).epsilon(1e-13));
    }
  }

  TEST_CASE("tanh tails keep relative accuracy") {
    // 1 - tanh z = 2 e^{-2z} / (1 + e^{-2z}).
    const double z = 30.0;
    const double ref = 2.0 * std::exp(-2.0 * z) / (1.0 + std::exp(-2.0 * z));
    CHECK(one_minus_tanh(z) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(one_plus_tanh(-z) == doctest::Approx(ref).epsilon(1e-14));
  }

  TEST_CASE("tf63 induced coefficients and endpoints") {
    const FamilyInstance f = make_tf63(0.1, 0.35, 1.0, 3.0);
    CHECK(*f.speed == doctest::Approx(81.0 / (5.0 * std::sqrt(62.0))).epsilon(1e-12));
    CHECK(f.params.d2 == doctest::Approx(8982.0 / 2051.0).epsilon(1e-12));
    CHECK(f.params.a2 == doctest::Approx(64.0 / 2051.0).epsilon(1e-12));
    CHECK(f.params.a4 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.params.a5 == doctest::Approx(269.0 / 140.0).epsilon(1e-12));
    REQUIRE(f.endpoints.size() == 2);
    CHECK(max_abs(f.endpoints[0].state - Densities{0.93, 0.7, 0.0}) < 1e-14);
    CHECK(max_abs(f.endpoints[1].state - Densities{0.0, 0.0, 1.0}) < 1e-14);
    for (const auto& e : f.endpoints) CHECK(is_steady_state(f.params, e.state));
  }

  TEST_CASE("tf63 rejects invalid inputs") {
    CHECK_THROWS_AS(make_tf63(0.1, -0.35, 1.0, 3.0), ConstraintError);
    CHECK_THROWS_AS(make_tf63(2.0, 0.35, 1.0, 3.0), ConstraintError);
  }

  TEST_CASE("tf65 endpoints") {
    const FamilyInstance f = make_tf65(1.0);
    REQUIRE(f.endpoints.size() == 2);
    // 8(3d - 5)/(3(d - 5)) at d = 1.
    CHECK(max_abs(f.endpoints[0].state - Densities{1.0, 4.0 / 3.0, 0.0}) < 1e-14);
    CHECK(max_abs(f.endpoints[1].state) < 1e-14);
    CHECK_THROWS_AS(make_tf65(2.0), ConstraintError);
  }

  TEST_CASE("fam40 positivity exponent identity") {
    for (double a1 : {0.05, 0.1, 0.7}) {
      for (double a4 : {0.1, 0.5, 0.9}) {
        const double b = fam40_positivity_beta(a1, a4);
        CHECK(1.0 + b * b * a1 * a1 == doctest::Approx((1.0 + a1) / (1.0 + a1 * a4)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("fam40 case i restrictions and t = 0 profile") {
    Fam40Spec s;
    s.delta1 = 0.5;
    CHECK_THROWS_AS(make_fam40(s), ConstraintError);
    s.delta1 = 2.0;
    const FamilyInstance f = make_fam40(s);
    CHECK(f.params.a5 == doctest::Approx(f.params.a1 * f.params.a4).epsilon(1e-15));
    // w = W(t) does not depend on x.
    CHECK(f.evaluate(0.3, 0.0).w == f.evaluate(0.3, 5.0).w);
  }

  TEST_CASE("family keys round-trip") {
    for (FamilyKind k : all_family_kinds()) CHECK(parse_family_key(family_key(k)) == k);
    CHECK_FALSE(parse_family_key("nosuch"));
  }
}
