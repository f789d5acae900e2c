// Exact and long-wave dispersion relations and the linear velocity-potential
// mode of the layer problem.

#ifndef KPWAVE_LINEAR_THEORY_HPP
#define KPWAVE_LINEAR_THEORY_HPP

#include "kpwave/wave_model.hpp"

namespace kpw {

// One linear mode eta = cos(k x' + l y' - omega t').  The potential is
// phi = (C1 e^(kappa z) + C2 e^(-kappa z)) sin(k x' + l y' - omega t'),
// with real C1, C2 chosen so the bottom and kinematic conditions hold.
struct LinearMode {
  double k = 0.0, l = 0.0;
  double omega = 0.0;
  double C1 = 0.0, C2 = 0.0;
  double h = 0.0;      // layer depth used to build the mode
  double kappa = 0.0;  // sqrt(k^2 + l^2)
};

// omega = sqrt(kappa (g + (s/rho) kappa^2) tanh(h kappa)), positive root;
// zero wavevector maps to omega = 0.
double dispersion_exact(double k, double l, const PhysicalContext& ctx);

// Long-wave expansion omega = sqrt(gh) [k + l^2/(2k) + (h^2/6)(3s/(g rho h^2) - 1) k^3].
// The k^3 coefficient sign is the one consistent with dispersion_exact
// (error O(k^5) at l = 0).  Throws for k = 0.
double dispersion_kp(double k, double l, const PhysicalContext& ctx);

// Builds the mode for (k, l) with omega from dispersion_exact.
LinearMode linear_potential(double k, double l, const PhysicalContext& ctx);

// z-profile via the C1/C2 exponential pair (valid for moderate h*kappa).
double potential_profile_series(const LinearMode& mode, double z);

// Same profile via the single cosh form; switches to an exp-normalized
// branch when h*kappa > 700 so it never overflows.
double potential_profile_cosh(const LinearMode& mode, double z);

// phi(x', y', z', t') and its z-derivative.
double potential_value(const LinearMode& mode, double xp, double yp, double zp,
                       double tp);
double potential_dz(const LinearMode& mode, double xp, double yp, double zp,
                    double tp);

}  // namespace kpw

#endif  // KPWAVE_LINEAR_THEORY_HPP
