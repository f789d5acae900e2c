#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "kpwave/solutions.hpp"

using namespace kpw;

namespace {

WaveSpec wall_spec(double p, double q, double c) {
  WaveSpec s;
  s.params = SolitonWallParams{p, q, c};
  return s;
}

WaveSpec single_harmonic_spec() {
  WaveSpec s;
  BreatherParams b;
  b.family = BreatherFamily::Harmonic;
  b.lambda = 0.5;
  b.mu = -0.1;
  s.params = b;
  return s;
}

}  // namespace

TEST_CASE("wall with c = 0 vanishes identically") {
  WaveSpec s = wall_spec(0.5, 0.7, 0.0);
  for (double x : {-3.0, 0.0, 2.5})
    for (double y : {-1.0, 4.0}) {
      EvalResult r = eval_f(s, x, y, 0.3);
      CHECK(r.value == 0.0);
      CHECK_FALSE(r.near_singular);
    }
}

TEST_CASE("wall p=q=0.5 is the sech^2 ridge") {
  WaveSpec s = wall_spec(0.5, 0.5, 1.0);
  CHECK(eval_f(s, 0, 0, 0).value == doctest::Approx(0.5).epsilon(1e-14));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    double x = U(rng);
    double expect = 0.5 / std::pow(std::cosh(x / 2.0), 2);
    CHECK(eval_f(s, x, 0, 0).value == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("c -> c e^a equals a translation in x") {
  double p = 0.6, q = 0.4, a = 0.8;
  WaveSpec s1 = wall_spec(p, q, 1.0);
  WaveSpec s2 = wall_spec(p, q, std::exp(a));
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    double x = U(rng), y = U(rng), t = 0.2 * U(rng);
    double lhs = eval_f(s2, x, y, t).value;
    double rhs = eval_f(s1, x + a / (p + q), y, t).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("half cut vanishes where tau has the other sign") {
  WaveSpec s = single_harmonic_spec();
  // scan a line; tau changes sign across the singular line x = 2 mu y
  double y = 1.0, t = 0.0;
  int pos_nonzero = 0, neg_nonzero = 0;
  for (double x = -3.0; x <= 3.0; x += 0.05) {
    double fp = eval_half_cut(s, HalfCutSide::TauPositive, x, y, t);
    double fn = eval_half_cut(s, HalfCutSide::TauNegative, x, y, t);
    CHECK((fp == 0.0 || fn == 0.0));  // sides partition the plane
    EvalResult r = eval_f(s, x, y, t);
    if (!r.near_singular && std::isfinite(r.value))
      CHECK(fp + fn == doctest::Approx(r.value).epsilon(1e-12));
    if (fp != 0.0) ++pos_nonzero;
    if (fn != 0.0) ++neg_nonzero;
  }
  CHECK(pos_nonzero > 0);
  CHECK(neg_nonzero > 0);
}

TEST_CASE("half cut rejects other families") {
  WaveSpec s = wall_spec(0.5, 0.5, 1.0);
  CHECK_THROWS_AS(eval_half_cut(s, HalfCutSide::TauPositive, 0, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("regularization fixed points and limits") {
  CHECK(regularize_log(0.0) == 0.0);
  CHECK(regularize_log(-1e6) ==
        doctest::Approx(-std::log(std::log(2.0) + 1.0)).epsilon(1e-12));
  CHECK(regularize_log(10.0) == doctest::Approx(std::log(11.0)).epsilon(1e-14));
  CHECK(regularize_log(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // sign parity and |F| <= |f| on (0, 1]
  for (double f = 0.05; f <= 1.0; f += 0.05) {
    CHECK(regularize_log(f) > 0.0);
    CHECK(regularize_log(-f) < 0.0);
    CHECK(std::abs(regularize_log(f)) <= f * 1.02);
    CHECK(std::abs(regularize_log(-f)) <= f * 1.02);
  }
  // monotone on the positive side
  double prev = 0.0;
  for (double f = 0.1; f < 30.0; f += 0.1) {
    double v = regularize_log(f);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("clamped renormalization branches") {
  double m = 10.0;
  CHECK(clamp_renormalize(m + 5.0, m) == m);
  CHECK(clamp_renormalize(m / 2.0, m) == m / 2.0);
  CHECK(clamp_renormalize(-3.0, m) == regularize_log(-3.0));
  CHECK(clamp_renormalize(0.0, m) == 0.0);
}

TEST_CASE("sampled zero field has no mask") {
  WaveSpec s = wall_spec(0.5, 0.7, 0.0);
  GridSpec g;
  g.x_min = -2;
  g.x_max = 2;
  g.y_min = -2;
  g.y_max = 2;
  g.nx = 16;
  g.ny = 12;
  Field f = sample_field(s, g, Quantity::raw());
  for (double v : f.values) CHECK(v == 0.0);
  for (auto mv : f.mask) CHECK(mv == 0);
}

TEST_CASE("sampled breather field is finite off the mask") {
  WaveSpec s = single_harmonic_spec();
  GridSpec g;
  g.x_min = -15;
  g.x_max = 15;
  g.y_min = -15;
  g.y_max = 15;
  g.nx = 201;  // odd count puts a node exactly on the tau zero at the origin
  g.ny = 201;
  Field f = sample_field(s, g, Quantity::raw());
  int masked = 0;
  for (int i = 0; i < g.ny; ++i)
    for (int j = 0; j < g.nx; ++j) {
      if (f.masked(i, j)) {
        ++masked;
        continue;
      }
      CHECK(std::isfinite(f.at(i, j)));
    }
  CHECK(masked > 0);
}

TEST_CASE("clamped sampling is bounded by both rails") {
  WaveSpec s;
  BreatherSuperpositionParams bs;
  BreatherParams b1;
  b1.family = BreatherFamily::Hyperbolic;
  b1.chi = 0.6;
  b1.lambda = 0.5;
  b1.mu = 0.2;
  BreatherParams b2 = b1;
  b2.chi = -0.7;
  b2.lambda = 1.0;
  b2.mu = 0.5;
  bs.breathers = {b1, b2};
  s.params = bs;
  GridSpec g;
  g.x_min = -15;
  g.x_max = 15;
  g.y_min = -15;
  g.y_max = 15;
  g.nx = 150;
  g.ny = 150;
  g.t = 0.0;
  Field f = sample_field(s, g, Quantity::clamped(10.0));
  double lo = -std::log(std::log(2.0) + 1.0);
  double hi = -1e30;
  for (int i = 0; i < g.ny; ++i)
    for (int j = 0; j < g.nx; ++j) {
      if (f.masked(i, j)) continue;
      CHECK(f.at(i, j) <= 10.0);
      CHECK(f.at(i, j) >= lo - 1e-12);
      hi = std::max(hi, f.at(i, j));
    }
  CHECK(hi == 10.0);  // the spike reaches the clamp
}

TEST_CASE("sampling is identical for any worker count") {
  WaveSpec s = single_harmonic_spec();
  GridSpec g;
  g.x_min = -5;
  g.x_max = 5;
  g.y_min = -5;
  g.y_max = 5;
  g.nx = 64;
  g.ny = 64;
  Field f1 = sample_field(s, g, Quantity::log(), 1);
  Field f2 = sample_field(s, g, Quantity::log(), 2);
  Field f7 = sample_field(s, g, Quantity::log(), 7);
  CHECK(std::memcmp(f1.values.data(), f2.values.data(),
                    f1.values.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(f1.values.data(), f7.values.data(),
                    f1.values.size() * sizeof(double)) == 0);
  CHECK(f1.mask == f2.mask);
  CHECK(f1.mask == f7.mask);
}
