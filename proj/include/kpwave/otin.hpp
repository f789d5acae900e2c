// Time-sweep analysis of superposition fields: amplitude-spike (OTIN)
// detection, peak clustering and the pressure-drop proxy.

#ifndef KPWAVE_OTIN_HPP
#define KPWAVE_OTIN_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "kpwave/solutions.hpp"

namespace kpw {

struct SweepConfig {
  WaveSpec spec;
  GridSpec window;              // t field is ignored; t comes from t_values
  std::vector<double> t_values; // strictly increasing, length >= 3
  Quantity quantity = Quantity::raw();
  int workers = 0;
};

struct SweepFrame {
  double t = 0.0;
  Field field;
  double raw_max = 0.0;   // over unmasked cells
  double max_x = 0.0, max_y = 0.0;
};

struct OtinEvent {
  double t_peak = 0.0;
  double x = 0.0, y = 0.0;
  double peak_value = 0.0;
  double background_value = 0.0;
  double ratio = 0.0;
};

struct PeakCluster {
  double t = 0.0;
  // (x, y, value), descending by value
  std::vector<std::array<double, 3>> maxima;
  int count() const { return static_cast<int>(maxima.size()); }
};

// Default peak/background windows for the OTIN scan.
inline constexpr double kOtinPeakWindow = 0.23;
inline constexpr double kOtinBackgroundLo = 0.3;
inline constexpr double kOtinBackgroundHi = 1.0;

std::vector<double> default_peak_times(int n = 9);
std::vector<double> default_background_times(int per_side = 4);

// One Field per t value; deterministic across runs and worker counts.
std::vector<SweepFrame> sweep(const SweepConfig& config);

// Ratio of raw frame maxima between the peak and background time subsets.
// Detection always uses raw values, whatever the render quantity was.
OtinEvent detect_otin(const std::vector<SweepFrame>& frames,
                      std::span<const double> background_ts,
                      std::span<const double> peak_ts);

// Strict 8-neighborhood local maxima above threshold_frac * global max.
PeakCluster cluster_peaks(const Field& field, double threshold_frac);

// Sign of -d(eta)/dt at the series midpoint: -1 indicates a pressure drop
// under a rising surface, +1 a rise, 0 flat.  Needs >= 3 samples.
int pressure_proxy(std::span<const double> elevation_series);

}  // namespace kpw

#endif  // KPWAVE_OTIN_HPP
