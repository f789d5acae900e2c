#include <cmath>
#include <random>

#include "doctest.h"
#include "kpwave/kinematics.hpp"
#include "kpwave/solutions.hpp"

using namespace kpw;

namespace {

BreatherParams make_breather(BreatherFamily fam, double lambda, double mu,
                             double chi, double gamma = 0, double rho = 0) {
  BreatherParams b;
  b.family = fam;
  b.lambda = lambda;
  b.mu = mu;
  b.chi = chi;
  b.gamma = gamma;
  b.rho = rho;
  return b;
}

}  // namespace

TEST_CASE("wall velocity line for p = q") {
  VelocityResult r = wall_velocity({0.7, 0.7, 1.0}, AlphaSign::PlusOne);
  REQUIRE(r.kind == VelocityResult::Kind::LineOfSolutions);
  CHECK(r.vx == doctest::Approx(1.4 * 1.4));
  CHECK(r.vy == 0.0);
  CHECK(r.dir_x == doctest::Approx(0.0));
  CHECK(r.dir_y == doctest::Approx(1.0));
}

TEST_CASE("wall velocity constraint and null direction") {
  SolitonWallParams w{0.6, 0.4, 1.0};
  VelocityResult r = wall_velocity(w, AlphaSign::PlusOne);
  double rhs = 1.12;  // (p+q)^2 + 3 (p-q)^2
  auto residual = [&](double vx, double vy) {
    return vx / rhs + (w.q - w.p) / rhs * vy - 1.0;
  };
  CHECK(residual(r.vx, r.vy) == doctest::Approx(0.0).epsilon(1e-12));
  for (double step : {-2.0, 1.0, 5.5})
    CHECK(residual(r.vx + step * r.dir_x, r.vy + step * r.dir_y) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two-wall velocity worked example and residuals") {
  SolitonWallParams w1{0.5, 0.5, 1.0}, w2{0.6, 0.4, 1.0};
  VelocityResult r = two_wall_velocity(w1, w2, AlphaSign::PlusOne);
  REQUIRE(r.kind == VelocityResult::Kind::Unique);
  CHECK(r.vx == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.vy == doctest::Approx(-0.6).epsilon(1e-13));
  for (const auto& w : {w1, w2}) {
    double rhs = std::pow(w.p + w.q, 2) + 3.0 * std::pow(w.p - w.q, 2);
    CHECK(r.vx + (w.q - w.p) * r.vy - rhs == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("two-wall degeneracy triggers exactly on equal differences") {
  SolitonWallParams w1{0.65, 0.35, 1.0}, w2{0.9, 0.6, 2.0};  // both p-q = 0.3
  VelocityResult r = two_wall_velocity(w1, w2, AlphaSign::PlusOne);
  CHECK(r.kind == VelocityResult::Kind::Degenerate);
}

TEST_CASE("harmonic breather velocity at chi = pi/4") {
  BreatherParams b = make_breather(BreatherFamily::Harmonic, 1.0, 0.0, M_PI / 4);
  VelocityResult r = breather_velocity(b, AlphaSign::PlusOne);
  REQUIRE(r.kind == VelocityResult::Kind::Unique);
  CHECK(r.vx == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(r.vy == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("hyperbolic breather velocity saturates at large chi") {
  BreatherParams b = make_breather(BreatherFamily::Hyperbolic, 1.0, 0.0, 10.0);
  VelocityResult r = breather_velocity(b, AlphaSign::PlusOne);
  REQUIRE(r.kind == VelocityResult::Kind::Unique);
  CHECK(r.vx == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.vy == doctest::Approx(-4.0 / std::tanh(10.0)).epsilon(1e-12));
}

TEST_CASE("cosh breather velocity at chi = 0") {
  BreatherParams b = make_breather(BreatherFamily::Cosh, 0.4, 0.05, 0.0);
  VelocityResult r = breather_velocity(b, AlphaSign::PlusOne);
  REQUIRE(r.kind == VelocityResult::Kind::Unique);
  CHECK(r.vx == doctest::Approx(4 * 0.16 - 12 * 0.0025).epsilon(1e-14));
  CHECK(r.vy == doctest::Approx(-12 * 0.05).epsilon(1e-14));
}

TEST_CASE("chi = 0 degeneracy for the oscillatory families") {
  for (BreatherFamily fam : {BreatherFamily::Harmonic, BreatherFamily::Hyperbolic}) {
    BreatherParams b = make_breather(fam, 0.8, 0.1, 0.0);
    VelocityResult r = breather_velocity(b, AlphaSign::PlusOne);
    CHECK(r.kind == VelocityResult::Kind::Degenerate);
  }
}

TEST_CASE("scale of delta = 1 is the identity") {
  WaveSpec s;
  s.params = make_breather(BreatherFamily::Harmonic, 0.5, -0.1, 0.3, 0.2, 0.1);
  WaveSpec out = scale_spec(s, 1.0);
  const auto& b = std::get<BreatherParams>(out.params);
  CHECK(b.lambda == 0.5);
  CHECK(b.mu == -0.1);
  CHECK(b.rho == 0.1);
}

TEST_CASE("scaling satisfies the exact point identity with exponent 2") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  double d = 2.0;

  WaveSpec wall;
  wall.params = SolitonWallParams{0.5, 0.5, 1.0};
  WaveSpec wall_scaled = scale_spec(wall, d);
  WaveSpec breather;
  breather.params = make_breather(BreatherFamily::Harmonic, 0.5, -0.1, 0.3, 0.2, 0.1);
  WaveSpec breather_scaled = scale_spec(breather, d);

  for (int i = 0; i < 30; ++i) {
    double x = U(rng), y = U(rng), t = 0.5 * U(rng);
    double lhs = eval_f(wall_scaled, x, y, t).value;
    double rhs = eval_f(wall, x / d, y / (d * d), t / (d * d * d)).value / (d * d);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    EvalResult eb = eval_f(breather, x / d, y / (d * d), t / (d * d * d));
    if (eb.near_singular) continue;
    double lb = eval_f(breather_scaled, x, y, t).value;
    CHECK(lb == doctest::Approx(eb.value / (d * d)).epsilon(1e-10));
  }
}

TEST_CASE("velocities transform as (vx/d^2, vy/d)") {
  BreatherParams b = make_breather(BreatherFamily::Hyperbolic, 0.7, 0.2, 0.5);
  WaveSpec s;
  s.params = b;
  double d = 3.0;
  WaveSpec scaled = scale_spec(s, d);
  VelocityResult v0 = breather_velocity(b, AlphaSign::PlusOne);
  VelocityResult v1 =
      breather_velocity(std::get<BreatherParams>(scaled.params), AlphaSign::PlusOne);
  CHECK(v1.vx == doctest::Approx(v0.vx / (d * d)).epsilon(1e-12));
  CHECK(v1.vy == doctest::Approx(v0.vy / d).epsilon(1e-12));
}

TEST_CASE("physical map round trip") {
  PhysicalContext ctx;
  ctx.g = 9.81;
  ctx.h = 50.0;
  ctx.rho_density = 1025.0;
  ctx.s_tension = 0.0;
  ctx.epsilon = 0.1;
  FrameMap map(ctx);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    double x = U(rng), y = U(rng), t = U(rng), f = U(rng);
    PhysicalPoint p = to_physical(x, y, t, f, map);
    KpPoint back = from_physical(p, map);
    CHECK(back.x == doctest::Approx(x).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(y).epsilon(1e-12));
    CHECK(back.t == doctest::Approx(t).epsilon(1e-12));
    CHECK(back.f == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("zero f maps to zero elevation") {
  PhysicalContext ctx;
  FrameMap map(ctx);
  PhysicalPoint p = to_physical(1.0, 2.0, 3.0, 0.0, map);
  CHECK(p.eta0 == 0.0);
  CHECK(p.height_m == 0.0);
}

TEST_CASE("deep-layer example elevation") {
  PhysicalContext ctx;
  ctx.g = 9.81;
  ctx.h = 50.0;
  ctx.rho_density = 1025.0;
  ctx.s_tension = 0.0;
  ctx.epsilon = 0.1;
  FrameMap map(ctx);
  PhysicalPoint p = to_physical(0, 0, 0, 1.0, map);
  double alpha2 = 2.0 / (50.0 * 50.0);  // s = 0
  CHECK(map.alpha2 == doctest::Approx(alpha2).epsilon(1e-14));
  CHECK(p.eta0 == doctest::Approx(4.0 / (3.0 * 0.1 * alpha2)).epsilon(1e-13));
  CHECK(p.height_m == doctest::Approx(0.1 * 50.0 * p.eta0).epsilon(1e-13));
}

TEST_CASE("flow velocity signs and bottom behavior") {
  PhysicalContext ctx;
  ctx.g = 9.81;
  ctx.h = 50.0;
  ctx.epsilon = 0.1;
  CHECK(flow_velocity(0.5, 0.0, -ctx.h, ctx).u_z == 0.0);
  CHECK(flow_velocity(0.5, 0.2, -1.0, ctx).u_x > 0.0);   // crest moves forward
  CHECK(flow_velocity(-0.5, 0.2, -1.0, ctx).u_x < 0.0);  // trough moves back
  CHECK(flow_velocity(0.5, 0.0, -1.0, ctx).u_x ==
        doctest::Approx(0.1 * std::sqrt(9.81 * 50.0) * 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(flow_velocity(0.0, 0.0, -ctx.h - 1.0, ctx), std::invalid_argument);
}

TEST_CASE("cosh profile moves rigidly at its closed-form velocity") {
  BreatherParams b = make_breather(BreatherFamily::Cosh, 0.4, 0.05, 0.6);
  WaveSpec s;
  s.params = b;
  VelocityResult v = breather_velocity(b, AlphaSign::PlusOne);
  REQUIRE(v.kind == VelocityResult::Kind::Unique);
  double dt = 1e-3;
  for (double x : {0.5, -1.0, 2.0})
    for (double y : {0.3, -0.7}) {
      EvalResult base = eval_f(s, x, y, 0.0);
      if (base.near_singular || std::abs(base.value) > 50.0) continue;
      double moved = eval_f(s, x + v.vx * dt, y + v.vy * dt, dt).value;
      CHECK(moved == doctest::Approx(base.value).epsilon(1e-6));
    }
}

TEST_CASE("singular line report mentions the band half width") {
  BreatherParams b = make_breather(BreatherFamily::Harmonic, 0.5, -0.1, 0.0);
  std::string rep = harmonic_singular_line_report(b, AlphaSign::PlusOne);
  CHECK(rep.find("direction") != std::string::npos);
  CHECK(rep.find("within 1") != std::string::npos);  // 1/(2*0.5*cos 0) = 1
}
