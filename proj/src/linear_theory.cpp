#include "kpwave/linear_theory.hpp"

#include <cmath>
#include <stdexcept>

namespace kpw {

namespace {
constexpr double kExpGuard = 700.0;
}

double dispersion_exact(double k, double l, const PhysicalContext& ctx) {
  double kappa = std::hypot(k, l);
  if (kappa == 0.0) return 0.0;
  double w2 = kappa * (ctx.g + ctx.s_tension / ctx.rho_density * kappa * kappa) *
              std::tanh(ctx.h * kappa);
  return std::sqrt(w2);
}

double dispersion_kp(double k, double l, const PhysicalContext& ctx) {
  if (k == 0.0) throw std::invalid_argument("dispersion_kp: k = 0");
  double gh = ctx.g * ctx.h;
  double s_term = 3.0 * ctx.s_tension / (ctx.g * ctx.rho_density * ctx.h * ctx.h);
  return std::sqrt(gh) *
         (k + l * l / (2.0 * k) + (ctx.h * ctx.h / 6.0) * (s_term - 1.0) * k * k * k);
}

LinearMode linear_potential(double k, double l, const PhysicalContext& ctx) {
  LinearMode m;
  m.k = k;
  m.l = l;
  m.h = ctx.h;
  m.kappa = std::hypot(k, l);
  if (m.kappa <= 0.0) throw std::invalid_argument("linear_potential: kappa = 0");
  m.omega = dispersion_exact(k, l, ctx);
  double e = std::exp(-2.0 * ctx.h * m.kappa);
  m.C1 = m.omega / (m.kappa * (1.0 - e));
  m.C2 = m.omega * e / (m.kappa * (1.0 - e));
  return m;
}

double potential_profile_series(const LinearMode& m, double z) {
  return m.C1 * std::exp(m.kappa * z) + m.C2 * std::exp(-m.kappa * z);
}

double potential_profile_cosh(const LinearMode& m, double z) {
  double hk = m.h * m.kappa;
  if (hk <= kExpGuard)
    return m.omega / m.kappa * std::cosh((z + m.h) * m.kappa) / std::sinh(hk);
  // exp-normalized: cosh((z+h)k)/sinh(hk) = e^{zk}(1+e^{-2(z+h)k})/(1-e^{-2hk})
  double num = std::exp(z * m.kappa) * (1.0 + std::exp(-2.0 * (z + m.h) * m.kappa));
  return m.omega / m.kappa * num / (1.0 - std::exp(-2.0 * hk));
}

double potential_value(const LinearMode& m, double xp, double yp, double zp,
                       double tp) {
  double phase = m.k * xp + m.l * yp - m.omega * tp;
  return potential_profile_cosh(m, zp) * std::sin(phase);
}

double potential_dz(const LinearMode& m, double xp, double yp, double zp,
                    double tp) {
  double phase = m.k * xp + m.l * yp - m.omega * tp;
  double hk = m.h * m.kappa;
  double dprof;
  if (hk <= kExpGuard) {
    dprof = m.omega * std::sinh((zp + m.h) * m.kappa) / std::sinh(hk);
  } else {
    double num = std::exp(zp * m.kappa) * (1.0 - std::exp(-2.0 * (zp + m.h) * m.kappa));
    dprof = m.omega * num / (1.0 - std::exp(-2.0 * hk));
  }
  return dprof * std::sin(phase);
}

}  // namespace kpw
