#include "kpwave/kinematics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kpw {

VelocityResult wall_velocity(const SolitonWallParams& w, AlphaSign alpha) {
  if (w.p + w.q == 0.0) throw std::invalid_argument("wall_velocity: p+q = 0");
  double a = alpha_squared(alpha);
  double P = w.p + w.q;
  double Q = w.p - w.q;
  VelocityResult r;
  r.kind = VelocityResult::Kind::LineOfSolutions;
  r.vx = P * P + 3.0 * a * Q * Q;
  r.vy = 0.0;
  double norm = std::sqrt(1.0 + Q * Q);
  r.dir_x = Q / norm;
  r.dir_y = 1.0 / norm;
  return r;
}

VelocityResult two_wall_velocity(const SolitonWallParams& w1,
                                 const SolitonWallParams& w2, AlphaSign alpha) {
  double a = alpha_squared(alpha);
  double b1 = w1.q - w1.p;
  double b2 = w2.q - w2.p;
  double det = b2 - b1;  // system: vx + b_i vy = rhs_i
  VelocityResult r;
  if (std::abs(det) <= 1e-12 * std::max({1.0, std::abs(b1), std::abs(b2)})) {
    r.kind = VelocityResult::Kind::Degenerate;
    r.reason = "parallel wall directions (p1-q1 = p2-q2)";
    return r;
  }
  double P1 = w1.p + w1.q, Q1 = w1.p - w1.q;
  double P2 = w2.p + w2.q, Q2 = w2.p - w2.q;
  double rhs1 = P1 * P1 + 3.0 * a * Q1 * Q1;
  double rhs2 = P2 * P2 + 3.0 * a * Q2 * Q2;
  r.kind = VelocityResult::Kind::Unique;
  r.vy = (rhs2 - rhs1) / det;
  r.vx = rhs1 - b1 * r.vy;
  return r;
}

namespace {

// tan(alpha*chi)/alpha resp. tanh(alpha*chi)/alpha expanded per alpha^2.
double tan_combo(double chi, AlphaSign alpha, bool hyperbolic) {
  bool plus = alpha == AlphaSign::PlusOne;
  if (hyperbolic) return plus ? std::tanh(chi) : std::tan(chi);
  return plus ? std::tan(chi) : std::tanh(chi);
}

}  // namespace

VelocityResult breather_velocity(const BreatherParams& b, AlphaSign alpha) {
  if (b.lambda == 0.0) throw std::invalid_argument("breather_velocity: lambda = 0");
  double a = alpha_squared(alpha);
  double lam = b.lambda, mu = b.mu;
  VelocityResult r;
  switch (b.family) {
    case BreatherFamily::Harmonic: {
      double T = tan_combo(b.chi, alpha, false);
      if (lam * T == 0.0) {
        r.kind = VelocityResult::Kind::Degenerate;
        r.reason = "infinite lateral speed at chi = 0";
        return r;
      }
      r.kind = VelocityResult::Kind::Unique;
      r.vx = -12.0 * a * mu * mu - 4.0 * lam * lam - 8.0 * lam * mu / T;
      r.vy = -12.0 * a * mu - 4.0 * lam / T;
      return r;
    }
    case BreatherFamily::Hyperbolic: {
      double T = tan_combo(b.chi, alpha, true);
      if (lam * T == 0.0) {
        r.kind = VelocityResult::Kind::Degenerate;
        r.reason = "infinite lateral speed at chi = 0";
        return r;
      }
      r.kind = VelocityResult::Kind::Unique;
      r.vx = 4.0 * lam * lam - 12.0 * a * mu * mu - 8.0 * lam * mu / T;
      r.vy = -4.0 * lam / T - 12.0 * a * mu;
      return r;
    }
    case BreatherFamily::Cosh: {
      double th = std::tanh(b.chi);
      r.kind = VelocityResult::Kind::Unique;
      r.vx = 4.0 * lam * lam - 12.0 * mu * mu - 8.0 * lam * mu * th;
      r.vy = -4.0 * lam * th - 12.0 * mu;
      return r;
    }
  }
  return r;
}

WaveSpec scale_spec(const WaveSpec& spec, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("scale_spec: delta must be positive");
  WaveSpec out = spec;
  auto scale_wall = [delta](SolitonWallParams w) {
    w.p /= delta;
    w.q /= delta;
    w.c /= delta;
    return w;
  };
  auto scale_breather = [delta](BreatherParams b) {
    b.lambda /= delta;
    b.mu /= delta;
    b.rho *= delta;
    return b;
  };
  if (auto* w = std::get_if<SolitonWallParams>(&out.params)) {
    *w = scale_wall(*w);
  } else if (auto* ws = std::get_if<WallSuperpositionParams>(&out.params)) {
    for (auto& e : ws->walls) e = scale_wall(e);
  } else if (auto* b = std::get_if<BreatherParams>(&out.params)) {
    *b = scale_breather(*b);
  } else {
    for (auto& e : std::get<BreatherSuperpositionParams>(out.params).breathers)
      e = scale_breather(e);
  }
  return out;
}

PhysicalPoint to_physical(double x, double y, double t, double f,
                          const FrameMap& map) {
  const PhysicalContext& c = map.ctx;
  double a = map.alpha2;
  PhysicalPoint p;
  p.t_prime = 3.0 * a * t / std::sqrt(c.g * c.h);
  p.x_prime = x + 3.0 * a * t;
  p.y_prime = y / std::sqrt(2.0);
  p.eta0 = 4.0 * f / (3.0 * c.epsilon * a);
  p.height_m = c.epsilon * c.h * p.eta0;
  return p;
}

KpPoint from_physical(const PhysicalPoint& p, const FrameMap& map) {
  const PhysicalContext& c = map.ctx;
  double a = map.alpha2;
  KpPoint k;
  double root_gh = std::sqrt(c.g * c.h);
  k.t = root_gh * p.t_prime / (3.0 * a);
  k.x = p.x_prime - root_gh * p.t_prime;
  k.y = p.y_prime * std::sqrt(2.0);
  k.f = 3.0 * c.epsilon * a * p.eta0 / 4.0;
  return k;
}

FlowVelocity flow_velocity(double eta0, double d_eta0_dxprime, double z_prime,
                           const PhysicalContext& ctx) {
  if (z_prime < -ctx.h)
    throw std::invalid_argument("flow_velocity: z' below the layer bottom");
  double root_gh = std::sqrt(ctx.g * ctx.h);
  FlowVelocity u;
  u.u_x = ctx.epsilon * root_gh * eta0;
  u.u_z = -ctx.epsilon * (ctx.h + z_prime) * root_gh * d_eta0_dxprime;
  return u;
}

std::string harmonic_singular_line_report(const BreatherParams& b,
                                          AlphaSign alpha) {
  if (b.family != BreatherFamily::Harmonic)
    throw std::invalid_argument("singular-line report is for the harmonic family");
  double a = alpha_squared(alpha);
  double lam = b.lambda, mu = b.mu;
  double C = a > 0 ? std::cos(b.chi) : std::cosh(b.chi);
  double T = tan_combo(b.chi, alpha, false);

  std::ostringstream os;
  double osc_norm = std::sqrt(1.0 + 4.0 * mu * mu);
  os << "oscillatory direction (" << 1.0 / osc_norm << ", " << -2.0 * mu / osc_norm
     << "), speed " << (12.0 * a * mu * mu - 4.0 * lam * lam) / osc_norm
     << " (independent of chi)\n";
  double me = mu - lam * T;
  double line_norm = std::sqrt(1.0 + 4.0 * me * me);
  os << "singular line direction (" << 1.0 / line_norm << ", " << -2.0 * me / line_norm
     << "), speed "
     << -12.0 * (lam * lam - a * mu * mu + 2.0 * a * lam * mu * T) / line_norm << "\n";
  if (lam * C != 0.0)
    os << "line stays within " << 1.0 / (2.0 * std::abs(lam * C))
       << " of the carrier line\n";
  return os.str();
}

}  // namespace kpw
