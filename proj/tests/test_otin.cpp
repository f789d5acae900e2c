#include <cmath>
#include <cstring>

#include "doctest.h"
#include "kpwave/kinematics.hpp"
#include "kpwave/otin.hpp"

using namespace kpw;

namespace {

WaveSpec two_breather_event_spec() {
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
  return s;
}

GridSpec window(double half, int n) {
  GridSpec g;
  g.x_min = -half; g.x_max = half;
  g.y_min = -half; g.y_max = half;
  g.nx = n; g.ny = n;
  return g;
}

Field synthetic_bumps() {
  Field f;
  f.grid = window(5.0, 51);
  size_t total = 51 * 51;
  f.values.assign(total, 0.0);
  f.raw_values.assign(total, 0.0);
  f.mask.assign(total, 0);
  const double cx[3] = {-2.5, 0.5, 3.0};
  const double cy[3] = {-2.0, 2.5, 0.0};
  for (int i = 0; i < 51; ++i)
    for (int j = 0; j < 51; ++j) {
      double x = f.grid.x_at(j), y = f.grid.y_at(i);
      double v = 0.0;
      for (int b = 0; b < 3; ++b)
        v += std::exp(-((x - cx[b]) * (x - cx[b]) + (y - cy[b]) * (y - cy[b])));
      f.values[i * 51 + j] = f.raw_values[i * 51 + j] = v;
    }
  return f;
}

}  // namespace

TEST_CASE("sweep validates its time axis") {
  SweepConfig cfg;
  cfg.spec = two_breather_event_spec();
  cfg.window = window(3.0, 8);
  cfg.t_values = {};
  CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
  cfg.t_values = {0.0, 0.0, 0.1};
  CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
}

TEST_CASE("sweep is deterministic") {
  SweepConfig cfg;
  cfg.spec = two_breather_event_spec();
  cfg.window = window(4.0, 32);
  cfg.t_values = {-0.2, 0.0, 0.2};
  auto a = sweep(cfg);
  auto b = sweep(cfg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].raw_max == b[i].raw_max);
    CHECK(std::memcmp(a[i].field.values.data(), b[i].field.values.data(),
                      a[i].field.values.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("identical peak and background windows give ratio 1") {
  SweepConfig cfg;
  cfg.spec = two_breather_event_spec();
  cfg.window = window(4.0, 24);
  cfg.t_values = {-0.1, 0.0, 0.1};
  auto frames = sweep(cfg);
  const double ts[] = {-0.1, 0.0, 0.1};
  OtinEvent ev = detect_otin(frames, ts, ts);
  CHECK(ev.ratio == doctest::Approx(1.0));
}

TEST_CASE("detection ignores the render quantity") {
  SweepConfig raw_cfg;
  raw_cfg.spec = two_breather_event_spec();
  raw_cfg.window = window(6.0, 48);
  raw_cfg.t_values = {-0.3, 0.0, 0.3};
  SweepConfig clamped_cfg = raw_cfg;
  clamped_cfg.quantity = Quantity::clamped(10.0);

  auto fr = sweep(raw_cfg);
  auto fc = sweep(clamped_cfg);
  const double peak[] = {0.0};
  const double bg[] = {-0.3, 0.3};
  OtinEvent er = detect_otin(fr, bg, peak);
  OtinEvent ec = detect_otin(fc, bg, peak);
  CHECK(er.ratio == doctest::Approx(ec.ratio).epsilon(1e-14));
}

TEST_CASE("all-zero field has no peaks") {
  Field f;
  f.grid = window(2.0, 9);
  f.values.assign(81, 0.0);
  f.raw_values.assign(81, 0.0);
  f.mask.assign(81, 0);
  PeakCluster pc = cluster_peaks(f, 0.5);
  CHECK(pc.count() == 0);
}

TEST_CASE("three synthetic bumps are three peaks") {
  PeakCluster pc = cluster_peaks(synthetic_bumps(), 0.5);
  CHECK(pc.count() == 3);
  // descending order by value
  for (int i = 1; i < pc.count(); ++i) CHECK(pc.maxima[i - 1][2] >= pc.maxima[i][2]);
}

TEST_CASE("threshold must be a fraction") {
  CHECK_THROWS_AS(cluster_peaks(synthetic_bumps(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cluster_peaks(synthetic_bumps(), 1.0), std::invalid_argument);
}

TEST_CASE("pressure proxy signs") {
  const double rising[] = {0.0, 1.0, 4.0};
  const double falling[] = {4.0, 1.0, 0.0};
  const double flat[] = {2.0, 2.0, 2.0};
  CHECK(pressure_proxy(rising) == -1);
  CHECK(pressure_proxy(falling) == 1);
  CHECK(pressure_proxy(flat) == 0);
  const double two[] = {0.0, 1.0};
  CHECK_THROWS_AS(pressure_proxy(two), std::invalid_argument);
}

TEST_CASE("elevation rises toward the central event") {
  // elevation at the t=0 peak cell across t in [-0.23, 0]: the proxy reports
  // a pressure drop while the spike rises
  WaveSpec s = two_breather_event_spec();
  GridSpec g = window(15.0, 151);
  g.t = 0.0;
  Field peak_frame = sample_field(s, g, Quantity::raw());
  int bi = 0, bj = 0;
  peak_frame.raw_max(&bi, &bj);
  double x = g.x_at(bj), y = g.y_at(bi);

  std::vector<double> series;
  for (double t : {-0.23, -0.115, 0.0})
    series.push_back(eval_f(s, x, y, t).value);
  CHECK(pressure_proxy(series) == -1);
}

TEST_CASE("the detection ratio is scaling covariant") {
  // rescaling parameters, window and times together maps every sample point
  // exactly, so the amplitude factor cancels from the ratio
  double d = 2.0;
  SweepConfig base;
  base.spec = two_breather_event_spec();
  base.window = window(10.0, 64);
  base.t_values = {-0.3, 0.0, 0.3};

  SweepConfig scaled;
  scaled.spec = base.spec;
  scaled.spec.params = std::get<BreatherSuperpositionParams>(
      scale_spec(base.spec, d).params);
  scaled.window = base.window;
  scaled.window.x_min *= d;
  scaled.window.x_max *= d;
  scaled.window.y_min *= d * d;  // x, y, t stretch as delta, delta^2, delta^3
  scaled.window.y_max *= d * d;
  for (double t : base.t_values) scaled.t_values.push_back(t * d * d * d);

  auto fb = sweep(base);
  auto fs = sweep(scaled);
  const double peak_b[] = {0.0}, bg_b[] = {-0.3, 0.3};
  const double peak_s[] = {0.0}, bg_s[] = {-0.3 * d * d * d, 0.3 * d * d * d};
  OtinEvent eb = detect_otin(fb, bg_b, peak_b);
  OtinEvent es = detect_otin(fs, bg_s, peak_s);
  CHECK(es.ratio == doctest::Approx(eb.ratio).epsilon(0.01));
  CHECK(es.peak_value == doctest::Approx(eb.peak_value / (d * d)).epsilon(1e-9));
}

TEST_CASE("default windows match the documented boundaries") {
  auto pk = default_peak_times();
  CHECK(pk.size() == 9);
  CHECK(pk.front() == doctest::Approx(-0.23));
  CHECK(pk.back() == doctest::Approx(0.23));
  auto bg = default_background_times();
  CHECK(bg.size() == 8);
  CHECK(bg.front() == doctest::Approx(-1.0));
  CHECK(bg.back() == doctest::Approx(1.0));
  for (double t : bg) CHECK(std::abs(t) >= 0.3 - 1e-12);
}

TEST_CASE("peak count of the split event is reported") {
  // observational: the grouping of high spots is counted, not asserted
  WaveSpec s = load_spec_file(std::string(KPWAVE_SPEC_DIR) + "/two_breather_split.json");
  GridSpec g = *s.grid;
  g.nx = g.ny = 150;
  Field f = sample_field(s, g, Quantity::raw());
  PeakCluster pc = cluster_peaks(f, 0.5);
  MESSAGE("split-event local maxima above half peak at t=0: ", pc.count());
  CHECK(pc.count() >= 1);
}
