#include "doctest.h"
#include <limits>
#include <string>

#include "kpwave/wave_model.hpp"

using namespace kpw;

TEST_CASE("wall with p+q = 0 is flagged") {
  WaveSpec s;
  s.params = SolitonWallParams{0.5, -0.5, 1.0};
  ValidationReport r = validate(s);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].what == "p+q = 0");
}

TEST_CASE("breather with lambda = 0 is flagged") {
  WaveSpec s;
  BreatherParams b;
  b.lambda = 0.0;
  s.params = b;
  ValidationReport r = validate(s);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].what == "lambda = 0");
}

TEST_CASE("two-breather hyperbolic parameter set is valid") {
  WaveSpec s;
  BreatherSuperpositionParams bs;
  BreatherParams b1;
  b1.family = BreatherFamily::Hyperbolic;
  b1.chi = 0.6; b1.lambda = 0.5; b1.mu = 0.2;
  BreatherParams b2 = b1;
  b2.chi = -0.7; b2.lambda = 1.0; b2.mu = 0.5;
  bs.breathers = {b1, b2};
  s.params = bs;
  s.alpha = AlphaSign::PlusOne;
  CHECK(validate(s).ok());
}

TEST_CASE("harmonic pair denominator can vanish for alpha^2 = -1") {
  // -(mu_n-mu_k)^2 + (lambda_n-lambda_k)^2 = 0 when the differences match
  WaveSpec s;
  BreatherSuperpositionParams bs;
  BreatherParams b1, b2;
  b1.lambda = 0.5; b1.mu = 0.1;
  b2.lambda = 0.9; b2.mu = 0.5;  // dl = 0.4 = dm
  bs.breathers = {b1, b2};
  s.params = bs;
  s.alpha = AlphaSign::MinusOne;
  CHECK_FALSE(validate(s).ok());
}

TEST_CASE("cosh family with alpha^2 = -1 is rejected") {
  WaveSpec s;
  BreatherParams b;
  b.lambda = 0.4;
  b.family = BreatherFamily::Cosh;
  s.params = b;
  s.alpha = AlphaSign::MinusOne;
  CHECK_FALSE(validate(s).ok());
}

TEST_CASE("parse a single-breather document") {
  const char* text = R"({
    "family": "harmonic_breather",
    "alpha_squared": 1,
    "params": {"lambda": 0.5, "mu": -0.1, "gamma": 0, "rho": 0, "chi": 0}
  })";
  WaveSpec s = load_spec(text);
  const auto* b = std::get_if<BreatherParams>(&s.params);
  REQUIRE(b != nullptr);
  CHECK(b->family == BreatherFamily::Harmonic);
  CHECK(b->lambda == 0.5);
  CHECK(b->mu == -0.1);
  CHECK(validate(s).ok());
}

TEST_CASE("empty document is a parse error") {
  CHECK_THROWS_AS(load_spec(""), ParseError);
  CHECK_THROWS_AS(load_spec("{}"), ParseError);
}

TEST_CASE("unknown family name is a parse error") {
  CHECK_THROWS_AS(load_spec(R"({"family":"quartic","params":{}})"), ParseError);
}

TEST_CASE("cosh family document with the gamma shift") {
  const char* text = R"({
    "family": "cosh_breather",
    "alpha_squared": 1,
    "params": {"lambda": 0.4, "mu": 0.05, "chi": 0.6, "gamma_half_pi_shift": true}
  })";
  WaveSpec s = load_spec(text);
  const auto* b = std::get_if<BreatherParams>(&s.params);
  REQUIRE(b != nullptr);
  CHECK(b->family == BreatherFamily::Cosh);
  CHECK(b->gamma_half_pi_shift);
  CHECK(validate(s).ok());
}

TEST_CASE("array params become a superposition, object params stay scalar") {
  WaveSpec one = load_spec(R"({"family":"soliton_wall","params":{"p":1,"q":1,"c":1}})");
  CHECK(std::holds_alternative<SolitonWallParams>(one.params));
  WaveSpec many = load_spec(R"({"family":"soliton_wall","params":[{"p":1,"q":1,"c":1}]})");
  REQUIRE(std::holds_alternative<WallSuperpositionParams>(many.params));
  CHECK(std::get<WallSuperpositionParams>(many.params).walls.size() == 1);
}

TEST_CASE("save -> load -> save is a fixpoint") {
  WaveSpec s;
  BreatherSuperpositionParams bs;
  BreatherParams b1;
  b1.family = BreatherFamily::Hyperbolic;
  b1.chi = 0.6; b1.lambda = 0.5; b1.mu = 0.2; b1.gamma = 0.125; b1.rho = -0.25;
  BreatherParams b2 = b1;
  b2.chi = -0.7; b2.lambda = 1.0; b2.mu = 0.5;
  bs.breathers = {b1, b2};
  s.params = bs;
  GridSpec g;
  g.x_min = -15; g.x_max = 15; g.y_min = -15; g.y_max = 15; g.nx = 300; g.ny = 300;
  s.grid = g;
  PhysicalContext ctx;
  s.physical = ctx;

  std::string once = save_spec(s);
  std::string twice = save_spec(load_spec(once));
  CHECK(once == twice);
}

TEST_CASE("grid invariants") {
  WaveSpec s;
  s.params = SolitonWallParams{0.5, 0.5, 1.0};
  GridSpec g;
  g.x_min = 1.0; g.x_max = -1.0;  // inverted
  g.nx = 1;
  s.grid = g;
  ValidationReport r = validate(s);
  CHECK(r.violations.size() >= 2);
}

TEST_CASE("validate never aborts on non-finite parameters") {
  WaveSpec s;
  s.params = SolitonWallParams{std::numeric_limits<double>::quiet_NaN(), 1.0, 1.0};
  ValidationReport r = validate(s);
  CHECK_FALSE(r.ok());

  BreatherParams b;
  b.lambda = std::numeric_limits<double>::infinity();
  s.params = b;
  CHECK_FALSE(validate(s).ok());
}

TEST_CASE("shipped parameter files load and validate") {
  for (const char* name :
       {"soliton_wall.json", "harmonic_breather.json", "cosh_breather.json",
        "two_breather_event.json", "two_breather_split.json"}) {
    WaveSpec s = load_spec_file(std::string(KPWAVE_SPEC_DIR) + "/" + name);
    CAPTURE(name);
    CHECK(validate(s).ok());
  }
}
