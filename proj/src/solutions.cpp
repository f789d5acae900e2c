#include "kpwave/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace kpw {

double Field::raw_max(int* arg_i, int* arg_j) const {
  double best = -std::numeric_limits<double>::infinity();
  int bi = -1, bj = -1;
  for (int i = 0; i < grid.ny; ++i)
    for (int j = 0; j < grid.nx; ++j) {
      if (mask[i * grid.nx + j]) continue;
      double v = raw_values[i * grid.nx + j];
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  if (bi < 0) return std::numeric_limits<double>::quiet_NaN();
  if (arg_i) *arg_i = bi;
  if (arg_j) *arg_j = bj;
  return best;
}

EvalResult eval_f(const WaveSpec& spec, double x, double y, double t) {
  TauEvaluation ev = tau_of_spec(spec, x, y, t);
  double r1 = ev.d_tau_dx / ev.tau;
  double r2 = ev.d2_tau_dx2 / ev.tau;
  return {2.0 * (r2 - r1 * r1), ev.near_singular};
}

double eval_half_cut(const WaveSpec& spec, HalfCutSide side, double x, double y,
                     double t) {
  const auto* b = std::get_if<BreatherParams>(&spec.params);
  if (!b || b->family != BreatherFamily::Harmonic)
    throw std::invalid_argument("eval_half_cut: defined for a single harmonic breather");
  TauEvaluation ev = tau_breather(*b, spec.alpha, x, y, t);
  bool keep = side == HalfCutSide::TauPositive ? ev.tau > 0.0 : ev.tau < 0.0;
  if (!keep) return 0.0;
  double r1 = ev.d_tau_dx / ev.tau;
  double r2 = ev.d2_tau_dx2 / ev.tau;
  return 2.0 * (r2 - r1 * r1);
}

double regularize_log(double f) {
  if (f == 0.0 || std::isnan(f)) return f == 0.0 ? 0.0 : f;
  if (f > 0.0) return std::log1p(f);  // |e^f - 1| + 1 == e^f exactly for f >= 0
  // f < 0: inner value is 2 - e^f, which tends to 2 as f -> -inf
  return -std::log1p(std::log(2.0 - std::exp(f)));
}

double clamp_renormalize(double f, double m) {
  if (std::isnan(f)) return f;
  if (f <= 0.0) return regularize_log(f);
  if (f < m) return f;
  return m;
}

namespace {

double convert(double f, const Quantity& q) {
  switch (q.kind) {
    case QuantityKind::Raw:
      return f;
    case QuantityKind::RegularizedLog:
      return regularize_log(f);
    case QuantityKind::Clamped:
      return clamp_renormalize(f, q.clamp_m);
  }
  return f;
}

}  // namespace

Field sample_field(const WaveSpec& spec, const GridSpec& grid, Quantity quantity,
                   int workers) {
  if (grid.nx < 2 || grid.ny < 2 || !(grid.x_min < grid.x_max) ||
      !(grid.y_min < grid.y_max))
    throw std::invalid_argument("sample_field: invalid grid");

  Field field;
  field.grid = grid;
  field.quantity = quantity;
  field.values.resize(static_cast<size_t>(grid.nx) * grid.ny);
  field.raw_values.resize(field.values.size());
  field.mask.resize(field.values.size());

  auto run_rows = [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i) {
      double y = grid.y_at(i);
      for (int j = 0; j < grid.nx; ++j) {
        double x = grid.x_at(j);
        EvalResult r = eval_f(spec, x, y, grid.t);
        size_t idx = static_cast<size_t>(i) * grid.nx + j;
        field.raw_values[idx] = r.value;
        field.values[idx] = convert(r.value, quantity);
        field.mask[idx] = r.near_singular || !std::isfinite(r.value) ? 1 : 0;
      }
    }
  };

  int n = workers > 0 ? workers
                      : std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  n = std::min(n, grid.ny);
  if (n <= 1) {
    run_rows(0, grid.ny);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    int chunk = (grid.ny + n - 1) / n;
    for (int w = 0; w < n; ++w) {
      int i0 = w * chunk;
      int i1 = std::min(grid.ny, i0 + chunk);
      if (i0 >= i1) break;
      pool.emplace_back(run_rows, i0, i1);
    }
    for (auto& th : pool) th.join();
  }
  return field;
}

}  // namespace kpw
