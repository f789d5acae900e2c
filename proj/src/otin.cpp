#include "kpwave/otin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kpw {

std::vector<double> default_peak_times(int n) {
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i)
    ts[i] = -kOtinPeakWindow + 2.0 * kOtinPeakWindow * i / (n - 1);
  return ts;
}

std::vector<double> default_background_times(int per_side) {
  std::vector<double> ts;
  for (int i = 0; i < per_side; ++i) {
    double t = kOtinBackgroundLo +
               (kOtinBackgroundHi - kOtinBackgroundLo) * i / (per_side - 1);
    ts.push_back(-t);
  }
  std::sort(ts.begin(), ts.end());
  for (int i = per_side - 1; i >= 0; --i) ts.push_back(-ts[i]);
  return ts;
}

std::vector<SweepFrame> sweep(const SweepConfig& config) {
  if (config.t_values.size() < 3)
    throw std::invalid_argument("sweep: need at least 3 t values");
  for (size_t i = 1; i < config.t_values.size(); ++i)
    if (!(config.t_values[i] > config.t_values[i - 1]))
      throw std::invalid_argument("sweep: t values must be strictly increasing");

  std::vector<SweepFrame> frames;
  frames.reserve(config.t_values.size());
  for (double t : config.t_values) {
    GridSpec g = config.window;
    g.t = t;
    SweepFrame fr;
    fr.t = t;
    fr.field = sample_field(config.spec, g, config.quantity, config.workers);
    int bi = 0, bj = 0;
    fr.raw_max = fr.field.raw_max(&bi, &bj);
    fr.max_x = g.x_at(bj);
    fr.max_y = g.y_at(bi);
    frames.push_back(std::move(fr));
  }
  return frames;
}

namespace {

bool contains_t(std::span<const double> ts, double t) {
  for (double v : ts)
    if (std::abs(v - t) <= 1e-12 * std::max(1.0, std::abs(v))) return true;
  return false;
}

}  // namespace

OtinEvent detect_otin(const std::vector<SweepFrame>& frames,
                      std::span<const double> background_ts,
                      std::span<const double> peak_ts) {
  if (background_ts.empty() || peak_ts.empty())
    throw std::invalid_argument("detect_otin: empty time subset");

  OtinEvent ev;
  double peak = -std::numeric_limits<double>::infinity();
  double bg = -std::numeric_limits<double>::infinity();
  bool saw_peak = false, saw_bg = false;
  for (const auto& fr : frames) {
    if (std::isnan(fr.raw_max)) continue;  // fully masked frame
    if (contains_t(peak_ts, fr.t)) {
      saw_peak = true;
      if (fr.raw_max > peak) {
        peak = fr.raw_max;
        ev.t_peak = fr.t;
        ev.x = fr.max_x;
        ev.y = fr.max_y;
      }
    }
    if (contains_t(background_ts, fr.t)) {
      saw_bg = true;
      bg = std::max(bg, fr.raw_max);
    }
  }
  if (!saw_peak) throw std::runtime_error("detect_otin: peak window is fully masked");
  if (!saw_bg) throw std::runtime_error("detect_otin: background window is fully masked");
  ev.peak_value = peak;
  ev.background_value = bg;
  ev.ratio = peak / bg;
  return ev;
}

PeakCluster cluster_peaks(const Field& field, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0))
    throw std::invalid_argument("cluster_peaks: threshold must be in (0,1)");
  PeakCluster pc;
  pc.t = field.grid.t;
  double gmax = field.raw_max();
  if (std::isnan(gmax) || gmax <= 0.0) return pc;
  double thresh = threshold_frac * gmax;

  int nx = field.grid.nx, ny = field.grid.ny;
  for (int i = 0; i < ny; ++i)
    for (int j = 0; j < nx; ++j) {
      if (field.masked(i, j)) continue;
      double v = field.raw_values[i * nx + j];
      if (!(v > thresh)) continue;
      bool strict_max = true;
      for (int di = -1; di <= 1 && strict_max; ++di)
        for (int dj = -1; dj <= 1 && strict_max; ++dj) {
          if (di == 0 && dj == 0) continue;
          int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= ny || jj < 0 || jj >= nx) continue;
          if (field.masked(ii, jj)) continue;
          if (field.raw_values[ii * nx + jj] >= v) strict_max = false;
        }
      if (strict_max)
        pc.maxima.push_back({field.grid.x_at(j), field.grid.y_at(i), v});
    }
  std::sort(pc.maxima.begin(), pc.maxima.end(),
            [](const auto& a, const auto& b) { return a[2] > b[2]; });
  return pc;
}

int pressure_proxy(std::span<const double> elevation_series) {
  if (elevation_series.size() < 3)
    throw std::invalid_argument("pressure_proxy: need at least 3 samples");
  size_t mid = elevation_series.size() / 2;
  double d = elevation_series[mid + 1] - elevation_series[mid - 1];
  if (d > 0.0) return -1;  // rising surface: pressure drop underneath
  if (d < 0.0) return 1;
  return 0;
}

}  // namespace kpw
