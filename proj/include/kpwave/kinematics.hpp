// Closed-form profile velocities, the parameter scaling map, the
// dimensionless <-> physical coordinate changes and the reconstructed flow
// velocity components.

#ifndef KPWAVE_KINEMATICS_HPP
#define KPWAVE_KINEMATICS_HPP

#include <string>

#include "kpwave/wave_model.hpp"

namespace kpw {

struct VelocityResult {
  enum class Kind { Unique, LineOfSolutions, Degenerate };
  Kind kind = Kind::Degenerate;
  double vx = 0.0, vy = 0.0;        // value (Unique) or base point (Line)
  double dir_x = 0.0, dir_y = 0.0;  // unit direction of the solution line
  std::string reason;               // set for Degenerate
};

// Frame map between KP coordinates (x, y, t, f) and physical primed
// coordinates (x', y', t', eta0).  alpha2 defaults to the value derived
// from the context; tests may override it to probe a mismatched transform.
struct FrameMap {
  PhysicalContext ctx;
  double alpha2;

  explicit FrameMap(const PhysicalContext& c) : ctx(c), alpha2(c.alpha2_phys()) {}
  FrameMap(const PhysicalContext& c, double alpha2_override)
      : ctx(c), alpha2(alpha2_override) {}
};

struct PhysicalPoint {
  double x_prime = 0.0;
  double y_prime = 0.0;
  double t_prime = 0.0;
  double eta0 = 0.0;        // dimensionless elevation
  double height_m = 0.0;    // physical surface height = epsilon*h*eta0
};

struct KpPoint {
  double x = 0.0, y = 0.0, t = 0.0, f = 0.0;
};

// Single wall: the defining constraint fixes velocity only up to the line
// direction ((p-q), 1)/sqrt(1+(p-q)^2).
VelocityResult wall_velocity(const SolitonWallParams& params, AlphaSign alpha);

// Two-wall system; Degenerate when p1 - q1 = p2 - q2.
VelocityResult two_wall_velocity(const SolitonWallParams& w1,
                                 const SolitonWallParams& w2, AlphaSign alpha);

// Unique profile velocity per family; Degenerate for a vanishing
// lambda*tan / lambda*tanh combination (harmonic/hyperbolic chi = 0).
VelocityResult breather_velocity(const BreatherParams& params, AlphaSign alpha);

// lambda -> lambda/delta, mu -> mu/delta, rho -> rho*delta (breathers);
// p,q,c -> /delta (walls).  The resulting spec satisfies
//   f_scaled(x, y, t) = delta^-2 f(x/delta, y/delta^2, t/delta^3)
// exactly, and velocities transform as (vx/delta^2, vy/delta).
WaveSpec scale_spec(const WaveSpec& spec, double delta);

PhysicalPoint to_physical(double x, double y, double t, double f,
                          const FrameMap& map);
KpPoint from_physical(const PhysicalPoint& p, const FrameMap& map);

struct FlowVelocity {
  double u_x = 0.0;  // m/s, along x'
  double u_z = 0.0;  // m/s, vertical
};

// Leading-order flow components; z_prime must be >= -h.
FlowVelocity flow_velocity(double eta0, double d_eta0_dxprime, double z_prime,
                           const PhysicalContext& ctx);

// Human-readable kinematics of the harmonic family's singular line
// (direction, speed, and the band half-width about the carrier line).
std::string harmonic_singular_line_report(const BreatherParams& params,
                                          AlphaSign alpha);

}  // namespace kpw

#endif  // KPWAVE_KINEMATICS_HPP
