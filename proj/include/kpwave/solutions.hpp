// Solution values f(x,y,t) = 2 d^2/dx^2 ln(tau), half-cut variants, bounded
// renormalizations and grid sampling.

#ifndef KPWAVE_SOLUTIONS_HPP
#define KPWAVE_SOLUTIONS_HPP

#include <cstdint>
#include <vector>

#include "kpwave/tau_kernel.hpp"
#include "kpwave/wave_model.hpp"

namespace kpw {

enum class QuantityKind { Raw, RegularizedLog, Clamped };

struct Quantity {
  QuantityKind kind = QuantityKind::Raw;
  double clamp_m = 10.0;  // used when kind == Clamped

  static Quantity raw() { return {QuantityKind::Raw, 0.0}; }
  static Quantity log() { return {QuantityKind::RegularizedLog, 0.0}; }
  static Quantity clamped(double m) { return {QuantityKind::Clamped, m}; }
};

// Sampled field at fixed t.  values is row-major ny x nx; masked cells keep
// the last computed value but are excluded from statistics and exports map
// them to the sentinel shade.
struct Field {
  GridSpec grid;
  Quantity quantity;
  std::vector<double> values;        // ny*nx
  std::vector<std::uint8_t> mask;    // 1 where near-singular
  std::vector<double> raw_values;    // unconverted f, always kept

  double at(int i, int j) const { return values[i * grid.nx + j]; }
  bool masked(int i, int j) const { return mask[i * grid.nx + j] != 0; }

  // max over unmasked raw values; quiet NaN when everything is masked
  double raw_max(int* arg_i = nullptr, int* arg_j = nullptr) const;
};

enum class HalfCutSide { TauPositive, TauNegative };

struct EvalResult {
  double value = 0.0;
  bool near_singular = false;
};

// f = 2 (tau_xx/tau - (tau_x/tau)^2); scalar route for single families,
// determinant route for superpositions.
EvalResult eval_f(const WaveSpec& spec, double x, double y, double t);

// Keeps f on one side of the singular line of a single harmonic breather
// and returns 0 on the other side.  Throws for any other family.
double eval_half_cut(const WaveSpec& spec, HalfCutSide side, double x, double y,
                     double t);

// sign(f) * ln(ln(|e^f - 1| + 1) + 1) with F(0) = 0.
double regularize_log(double f);

// Negative branch regularized, identity on (0, M), hard cap at M.
double clamp_renormalize(double f, double m);

// Samples spec on the grid.  workers = 0 picks a hardware default; results
// are identical for every worker count.
Field sample_field(const WaveSpec& spec, const GridSpec& grid, Quantity quantity,
                   int workers = 0);

}  // namespace kpw

#endif  // KPWAVE_SOLUTIONS_HPP
