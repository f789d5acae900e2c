// Finite-difference residual operators for the KP equation and its
// dimensional counterpart, plus extraction of the singular set tau = 0.
//
// Residuals are meshfree: derivatives come from analytic point evaluations
// of f at stencil offsets around each test node, so the verification step
// size is independent of the render grid spacing.

#ifndef KPWAVE_VERIFICATION_HPP
#define KPWAVE_VERIFICATION_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "kpwave/kinematics.hpp"
#include "kpwave/wave_model.hpp"

namespace kpw {

struct ResidualReport {
  GridSpec grid;
  double fd_step = 0.0;
  int stencil_order = 2;
  double residual_linf = 0.0;
  double residual_l2 = 0.0;
  // Richardson companion at fd_step/2, always computed
  double residual_linf_half = 0.0;
  double residual_l2_half = 0.0;
  double observed_order = 0.0;  // log2(linf / linf_half)
  int included_cells = 0;
  int excluded_cells = 0;
  bool step_warning = false;  // fd_step below the cancellation floor
  double field_scale = 0.0;   // max |f| over included nodes

  std::string to_json() const;
};

// f(x, y, t); set *ok = false when the value should not participate.
using FieldFn = std::function<double(double, double, double, bool*)>;

// Residual of dx(f_t + f_xxx + 6 f f_x) + 3 a f_yy at one point from 13
// analytic evaluations; *ok = false when any stencil evaluation is bad.
double kp_residual_at(const FieldFn& f, double alpha2, double x, double y,
                      double t, double h, bool* ok);

// Scans the grid nodes, excluding nodes within `margin` cells of any
// singular-masked node.  Deterministic reduction order.
ResidualReport kp_residual_of(const FieldFn& f, double alpha2, const GridSpec& grid,
                              double fd_step,
                              const std::vector<std::uint8_t>& singular_mask,
                              int extra_margin_cells = 5);

// Residual of the spec's own field.  The exclusion mask marks near-singular
// nodes and nodes straddling a sign change of tau (the singular set passes
// between them); the margin is stencil radius + 5 cells from that set.
ResidualReport kp_residual(const WaveSpec& spec, const GridSpec& grid,
                           double fd_step);

// Residual of the dimensional long-wave operator applied to
// eta0(x', y', t') obtained from the spec through the frame map.  The grid
// is interpreted in primed coordinates (grid.t = t').
ResidualReport physical_kp_residual(const WaveSpec& spec, const FrameMap& map,
                                    const GridSpec& grid_primed, double fd_step);

struct SingularCurve {
  // chains of (x, y) points at fixed t
  std::vector<std::vector<std::array<double, 2>>> chains;

  size_t total_points() const {
    size_t n = 0;
    for (const auto& c : chains) n += c.size();
    return n;
  }
};

// Marching squares over sign(tau) with linear interpolation of the zero
// crossing on cell edges; empty result when tau never changes sign.
SingularCurve extract_singular_curve(const WaveSpec& spec, const GridSpec& grid);

}  // namespace kpw

#endif  // KPWAVE_VERIFICATION_HPP
