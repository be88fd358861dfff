#include <cmath>

#include "doctest.h"
#include "hgf/error.hpp"
#include "hgf/solutions.hpp"
#include "hgf/symmetry.hpp"

using namespace hgf;

namespace {
const Params kGeneric{0.3, 0.7, 1.2, 0.4, 0.9, 1.0, 2.0, 3.0};
}

TEST_SUITE("symmetry") {
  TEST_CASE("generic coefficients admit only the translations") {
    CHECK(admissible_kinds(kGeneric) == std::vector<OpKind>{OpKind::Pt, OpKind::Px});
    const auto matches = admissible_ops(kGeneric);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].case_id == 0);
  }

  TEST_CASE("operator names round-trip") {
    for (OpKind k : all_op_kinds()) CHECK(parse_op_name(op_name(k)) == k);
    CHECK_FALSE(parse_op_name("Q9"));
  }

  TEST_CASE("translations act as shifts") {
    const JetPoint q{0.5, -1.0, {0.1, 0.2, 0.3}};
    const JetPoint px = SymmetryOp::make(OpKind::Px, kGeneric).apply(0.3, q);
    CHECK(px.x == doctest::Approx(-0.7).epsilon(1e-15));
    CHECK(px.t == q.t);
    CHECK(px.y == q.y);
    const JetPoint pt = SymmetryOp::make(OpKind::Pt, kGeneric).apply(0.3, q);
    CHECK(pt.t == doctest::Approx(0.8).epsilon(1e-15));
    const auto g = SymmetryOp::make(OpKind::Px, kGeneric).generator(q);
    CHECK(g == std::array<double, 5>{0.0, 1.0, 0.0, 0.0, 0.0});
  }

  TEST_CASE("operators outside their case are rejected") {
    CHECK_THROWS_AS(SymmetryOp::make(OpKind::Q1, kGeneric), ConstraintError);
  }

  TEST_CASE("group axioms on random points") {
    const auto pts = random_jet_points(200, 7);
    CHECK(pts.size() == 200);
    CHECK(flow_group_check(SymmetryOp::make(OpKind::Pt, kGeneric), 0.3, -0.1, pts));
    Fam40Spec s;
    const FamilyInstance f = make_fam40(s);
    CHECK(flow_group_check(SymmetryOp::make(OpKind::Q1, f.params), 0.3, -0.1, pts));
  }

  TEST_CASE("random points depend only on the seed") {
    const auto a = random_jet_points(5, 11), b = random_jet_points(5, 11), c = random_jet_points(5, 12);
    CHECK(a[4].y == b[4].y);
    CHECK_FALSE(a[4].y == c[4].y);
  }

  TEST_CASE("Q1 maps the exponential family to solutions") {
    const FamilyInstance f = make_fam40(Fam40Spec{});
    const auto op = SymmetryOp::make(OpKind::Q1, f.params);
    const FlowVerification v = verify_flow_maps_solutions(op, 0.3, f.evaluate, Window{0.0, 10.0, 1.0}, {4e-3, 2e-3, 1e-3});
    CHECK(v.contract_ok);
    CHECK(v.order_ok);
  }
}
