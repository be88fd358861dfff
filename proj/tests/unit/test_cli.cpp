#include <sstream>

#include "cli/cli.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "doctest.h"
#include "hgf/error.hpp"
#include "hgf/solutions.hpp"

using namespace hgf;
using namespace hgf::cli;

namespace {
int run_cli(const std::vector<std::string>& args, std::string& out, std::string& err) {
  std::ostringstream o, e;
  const int code = hgf::cli::run(args, o, e);
  out = o.str();
  err = e.str();
  return code;
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("number formatting") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(0.1) == "0.10000000000000001");
  }

  TEST_CASE("CSV round-trip is exact") {
    const FamilyInstance f = make_tf63(0.1, 0.35, 1.0, 3.0);
    const FieldState s = sample(f.evaluate, SpaceGrid{-3.0, 7.0, 41}, 0.7);
    std::stringstream ss;
    write_field_header(ss);
    write_field_rows(ss, s);
    write_field_rows(ss, sample(f.evaluate, s.grid, 0.9));
    const auto back = read_field_csv(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0].t == 0.7);
    CHECK(back[0].u == s.u);
    CHECK(back[0].v == s.v);
    CHECK(back[0].w == s.w);
    CHECK(back[0].grid.n == 41);
  }

  TEST_CASE("CSV reader rejects malformed input") {
    std::stringstream bad_header("t,x,u\n");
    CHECK_THROWS_AS(read_field_csv(bad_header), ConstraintError);
    std::stringstream bad_row("t,x,u,v,w\n0,0,1,2\n");
    CHECK_THROWS_AS(read_field_csv(bad_row), ConstraintError);
    std::stringstream uneven("t,x,u,v,w\n0,0,1,,\n0,1,1,,\n0,3,1,,\n");
    CHECK_THROWS_AS(read_field_csv(uneven), ConstraintError);
  }

  TEST_CASE("config parsing") {
    const Json ok = Json::parse(R"({"params": {"a1":0.3,"a2":0.7,"a3":1.2,"a4":0.4,"a5":0.9,"d1":1,"d2":2,"d3":3},
                                   "grid": {"x_min": 0, "x_max": 1, "h": 0.25}, "seed": 4})");
    const RunConfigFile c = parse_config(ok);
    CHECK(c.grid->n == 5);
    CHECK(*c.seed == 4);
    CHECK(c.params->d3 == 3.0);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"gird": {}})")), ConstraintError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"grid": {"x_min": 0, "x_max": 1, "n": 3, "m": 1}})")),
                    ConstraintError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"grid": {"x_min": 0, "x_max": 1, "n": 3, "h": 0.5}})")),
                    ConstraintError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"params": {"a1": 0.3}})")), ConstraintError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"family": {"key": "nosuch"}})")), ConstraintError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"family": {"key": "tf65", "delta": 1}})")), ConstraintError);
  }

  TEST_CASE("eval example row") {
    std::string out, err;
    CHECK(run_cli({"eval", "--family", "fisher", "--t", "0", "--xmin", "0", "--xmax", "0", "--n", "1"}, out, err) == 0);
    CHECK(out == "t,x,u,v,w\n0,0,0.25,,\n");
  }

  TEST_CASE("eval output reproduces the in-process residual") {
    const double t = 0.5, dt = 0.01;
    const SpaceGrid g{-5.0, 5.0, 501};
    std::vector<FieldState> fields;
    for (double s : {t - dt, t, t + dt}) {
      std::string out, err;
      REQUIRE(run_cli({"eval", "--family", "tf65", "--t", format_double(s), "--xmin", "-5", "--xmax", "5", "--n", "501"},
                      out, err) == 0);
      std::istringstream in(out);
      fields.push_back(read_field_csv(in).at(0));
    }
    const FamilyInstance f = make_tf65(1.0);
    const auto sys = ReactionDiffusionSystem::hgf(f.params);
    const ResidualReport direct = pde_residual(sys, f.evaluate, g, t, dt);
    const ResidualReport reread = pde_residual_from_fields(sys, fields[0], fields[1], fields[2]);
    for (std::size_t k = 0; k < 3; ++k) CHECK(reread.linf[k] == doctest::Approx(direct.linf[k]).epsilon(1e-12));
  }

  TEST_CASE("exit codes") {
    std::string out, err;
    CHECK(run_cli({"nosuch"}, out, err) == 1);
    CHECK(run_cli({"--help"}, out, err) == 0);
    CHECK(run_cli({"eval", "--family", "tf65", "--d", "3"}, out, err) == 1);
    CHECK(err.find("d") != std::string::npos);
    CHECK(run_cli({"symmetry", "verify", "--op", "Q7", "--family", "tf63"}, out, err) == 1);
  }

  TEST_CASE("symmetry list on generic coefficients") {
    std::string out, err;
    REQUIRE(run_cli({"symmetry", "list", "--a1", "0.3", "--a2", "0.7", "--a3", "1.2", "--a4", "0.4", "--a5", "0.9",
                     "--d1", "1", "--d2", "2", "--d3", "3"},
                    out, err) == 0);
    const Json r = Json::parse(out);
    CHECK(r["results"]["operators"] == Json::array({"Pt", "Px"}));
    CHECK(r["command"] == "symmetry list");
  }

  TEST_CASE("identical arguments give identical reports") {
    std::string a, b, err;
    const std::vector<std::string> args{"residual", "--family", "tf65", "--h", "0.004"};
    REQUIRE(run_cli(args, a, err) == 0);
    REQUIRE(run_cli(args, b, err) == 0);
    CHECK(a == b);
  }
}
