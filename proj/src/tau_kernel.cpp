#include "kpwave/tau_kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kpw {

namespace {

constexpr double kExpGuard = 700.0;       // exp() overflows just past 709
constexpr double kDetPhaseBudget = 600.0; // total phase before the det overflows

double re_part(double z) { return z; }
double re_part(std::complex<double> z) { return z.real(); }

// sinh(z) * exp(-s) without overflow; full precision for moderate arguments,
// exp-difference form when either magnitude is genuinely huge.
template <typename T>
T sinh_scaled(T z, double s) {
  using std::exp;
  using std::sinh;
  if (s == 0.0) return sinh(z);
  if (s <= 690.0 && std::abs(re_part(z)) <= 690.0) return sinh(z) * exp(-s);
  return (exp(z - s) - exp(-z - s)) / 2.0;
}

template <typename T>
T cosh_scaled(T z, double s) {
  using std::cosh;
  using std::exp;
  if (s == 0.0) return cosh(z);
  if (s <= 690.0 && std::abs(re_part(z)) <= 690.0) return cosh(z) * exp(-s);
  return (exp(z - s) + exp(-z - s)) / 2.0;
}

struct BreatherPhases {
  double upsilon;      // linear part
  double gamma_big;    // oscillatory phase
  double d_upsilon_dx; // cos/cosh/sinh(chi) coefficient
  // additive term magnitudes of 2*lambda*upsilon, for the singularity scale
  double term_rho, term_x, term_y, term_t;
};

BreatherPhases harmonic_phases(const BreatherParams& b, double a, double x,
                               double y, double t) {
  double C = a > 0 ? std::cos(b.chi) : std::cosh(b.chi);
  double S = a > 0 ? std::sin(b.chi) : std::sinh(b.chi);
  BreatherPhases ph;
  double ycoef = 2.0 * (b.lambda * S - b.mu * C);
  double tcoef = 12.0 * (b.lambda * b.lambda * C - a * b.mu * b.mu * C +
                         2.0 * a * b.lambda * b.mu * S);
  ph.upsilon = b.rho + x * C + ycoef * y + tcoef * t;
  ph.gamma_big = b.gamma + b.lambda * x - 2.0 * b.lambda * b.mu * y +
                 4.0 * b.lambda * (b.lambda * b.lambda - 3.0 * a * b.mu * b.mu) * t;
  ph.d_upsilon_dx = C;
  double two_l = std::abs(2.0 * b.lambda);
  ph.term_rho = two_l * std::abs(b.rho);
  ph.term_x = two_l * std::abs(x * C);
  ph.term_y = two_l * std::abs(ycoef * y);
  ph.term_t = two_l * std::abs(tcoef * t);
  return ph;
}

BreatherPhases hyperbolic_phases(const BreatherParams& b, double a, double x,
                                 double y, double t) {
  double C = a > 0 ? std::cosh(b.chi) : std::cos(b.chi);
  double S = a > 0 ? std::sinh(b.chi) : std::sin(b.chi);
  BreatherPhases ph;
  double ycoef = -2.0 * (b.lambda * S + b.mu * C);
  double tcoef = -12.0 * (b.lambda * b.lambda * C + a * b.mu * b.mu * C +
                          2.0 * a * b.lambda * b.mu * S);
  ph.upsilon = b.rho + x * C + ycoef * y + tcoef * t;
  ph.gamma_big = b.gamma + b.lambda * x - 2.0 * b.lambda * b.mu * y -
                 4.0 * b.lambda * (b.lambda * b.lambda + 3.0 * a * b.mu * b.mu) * t;
  ph.d_upsilon_dx = C;
  double two_l = std::abs(2.0 * b.lambda);
  ph.term_rho = two_l * std::abs(b.rho);
  ph.term_x = two_l * std::abs(x * C);
  ph.term_y = two_l * std::abs(ycoef * y);
  ph.term_t = two_l * std::abs(tcoef * t);
  return ph;
}

BreatherPhases cosh_phases(const BreatherParams& b, double x, double y, double t) {
  double C = std::cosh(b.chi);
  double S = std::sinh(b.chi);
  BreatherPhases ph;
  double ycoef = -2.0 * (b.lambda * C + b.mu * S);
  double tcoef = -12.0 * ((b.lambda * b.lambda + b.mu * b.mu) * S +
                          2.0 * b.lambda * b.mu * C);
  ph.upsilon = b.rho + x * S + ycoef * y + tcoef * t;
  ph.gamma_big = b.gamma + b.lambda * x - 2.0 * b.lambda * b.mu * y -
                 4.0 * b.lambda * (b.lambda * b.lambda + 3.0 * b.mu * b.mu) * t;
  ph.d_upsilon_dx = S;
  double two_l = std::abs(2.0 * b.lambda);
  ph.term_rho = two_l * std::abs(b.rho);
  ph.term_x = two_l * std::abs(x * S);
  ph.term_y = two_l * std::abs(ycoef * y);
  ph.term_t = two_l * std::abs(tcoef * t);
  return ph;
}

void finish_scalar(TauEvaluation& ev, std::initializer_list<double> terms) {
  ev.scale = 0.0;
  for (double m : terms) ev.scale = std::max(ev.scale, std::abs(m));
  ev.near_singular = std::abs(ev.tau) <= kSigmaTol * ev.scale;
}

}  // namespace

TauEvaluation tau_wall(const SolitonWallParams& w, AlphaSign alpha, double x,
                       double y, double t) {
  double a = alpha_squared(alpha);
  double P = w.p + w.q;
  if (P == 0.0) throw std::invalid_argument("tau_wall: p+q = 0");
  double Q = w.p - w.q;
  double theta = P * x + (w.q * w.q - w.p * w.p) * y - P * (P * P + 3.0 * a * Q * Q) * t;
  double A = w.c / P;
  TauEvaluation ev;
  if (theta <= kExpGuard) {
    double e = std::exp(theta);
    ev.tau = 1.0 + A * e;
    ev.d_tau_dx = A * P * e;
    ev.d2_tau_dx2 = A * P * P * e;
    finish_scalar(ev, {1.0, A * e});
  } else {
    // factored form: tau_true = exp(theta) * (exp(-theta) + A)
    ev.log_scale = theta;
    double e = std::exp(-theta);
    ev.tau = e + A;
    ev.d_tau_dx = A * P;
    ev.d2_tau_dx2 = A * P * P;
    finish_scalar(ev, {e, A});
  }
  return ev;
}

TauEvaluation tau_breather(const BreatherParams& b, AlphaSign alpha, double x,
                           double y, double t) {
  if (b.lambda == 0.0) throw std::invalid_argument("tau_breather: lambda = 0");
  double a = alpha_squared(alpha);
  TauEvaluation ev;
  switch (b.family) {
    case BreatherFamily::Harmonic: {
      BreatherPhases ph = harmonic_phases(b, a, x, y, t);
      double s2g = std::sin(2.0 * ph.gamma_big);
      ev.tau = 2.0 * b.lambda * ph.upsilon - s2g;
      ev.d_tau_dx = 2.0 * b.lambda * (ph.d_upsilon_dx - std::cos(2.0 * ph.gamma_big));
      ev.d2_tau_dx2 = 4.0 * b.lambda * b.lambda * s2g;
      finish_scalar(ev, {ph.term_rho, ph.term_x, ph.term_y, ph.term_t, s2g});
      break;
    }
    case BreatherFamily::Hyperbolic: {
      BreatherPhases ph = hyperbolic_phases(b, a, x, y, t);
      double g2 = 2.0 * ph.gamma_big;
      double s = std::abs(g2) > kExpGuard ? std::abs(g2) : 0.0;
      ev.log_scale = s;
      double damp = s == 0.0 ? 1.0 : std::exp(-s);
      double sh = sinh_scaled(g2, s);
      double ch = cosh_scaled(g2, s);
      ev.tau = 2.0 * b.lambda * ph.upsilon * damp - sh;
      ev.d_tau_dx = 2.0 * b.lambda * (ph.d_upsilon_dx * damp - ch);
      ev.d2_tau_dx2 = -4.0 * b.lambda * b.lambda * sh;
      finish_scalar(ev, {ph.term_rho * damp, ph.term_x * damp, ph.term_y * damp,
                         ph.term_t * damp, sh});
      break;
    }
    case BreatherFamily::Cosh: {
      BreatherPhases ph = cosh_phases(b, x, y, t);
      double sign = b.gamma_half_pi_shift ? -1.0 : 1.0;
      double g2 = 2.0 * ph.gamma_big;
      double s = std::abs(g2) > kExpGuard ? std::abs(g2) : 0.0;
      ev.log_scale = s;
      double damp = s == 0.0 ? 1.0 : std::exp(-s);
      double sh = sinh_scaled(g2, s);
      double ch = cosh_scaled(g2, s);
      ev.tau = 2.0 * b.lambda * ph.upsilon * damp + sign * ch;
      ev.d_tau_dx = 2.0 * b.lambda * (ph.d_upsilon_dx * damp + sign * sh);
      ev.d2_tau_dx2 = 4.0 * b.lambda * b.lambda * sign * ch;
      finish_scalar(ev, {ph.term_rho * damp, ph.term_x * damp, ph.term_y * damp,
                         ph.term_t * damp, ch});
      break;
    }
  }
  return ev;
}

MatrixTau tau_matrix(const WallSuperpositionParams& params, AlphaSign alpha,
                     double x, double y, double t) {
  const auto& walls = params.walls;
  int n = static_cast<int>(walls.size());
  if (n == 0) throw std::invalid_argument("tau_matrix: empty wall superposition");
  double a = alpha_squared(alpha);

  std::vector<double> theta(n);
  for (int j = 0; j < n; ++j) {
    double P = walls[j].p + walls[j].q;
    double Q = walls[j].p - walls[j].q;
    theta[j] = P * x + (walls[j].q * walls[j].q - walls[j].p * walls[j].p) * y -
               P * (P * P + 3.0 * a * Q * Q) * t;
  }

  MatrixTau mt;
  mt.n = n;
  mt.is_complex = false;
  mt.k.resize(n * n);
  mt.dk_dx.resize(n * n);
  mt.d2k_dx2.resize(n * n);

  // column rescaling keeps the determinant representable (each exponential
  // multiplies one column, so their sum is what can overflow); traces and
  // the second log-derivative are invariant under it
  double total_phase = 0.0;
  for (int j = 0; j < n; ++j) total_phase += std::max(theta[j], 0.0);
  bool rescale = total_phase > kDetPhaseBudget;
  for (int j = 0; j < n; ++j) {
    double s = rescale ? std::max(theta[j], 0.0) : 0.0;
    mt.log_scale += s;
    double e = std::exp(theta[j] - s);
    double delta = s == 0.0 ? 1.0 : std::exp(-s);
    for (int m = 0; m < n; ++m) {
      double denom = walls[j].p + walls[m].q;
      if (std::abs(denom) <= 1e-12 * std::max(1.0, std::abs(walls[j].p) + std::abs(walls[m].q)))
        throw std::domain_error("tau_matrix: p_n + q_m vanishes for pair (" +
                                std::to_string(j) + "," + std::to_string(m) + ")");
      double P = walls[j].p + walls[j].q;
      double g = walls[j].c * e / denom;
      int idx = m * n + j;
      mt.k[idx] = (m == j ? delta : 0.0) + g;
      mt.dk_dx[idx] = P * g;
      mt.d2k_dx2[idx] = P * P * g;
    }
  }
  return mt;
}

namespace {

// Shared off-diagonal assembly for both breather families.  The scalar type
// is double for alpha^2 = +1 and complex for alpha^2 = -1, where the chi/2
// offsets ride on the imaginary axis and the matrix becomes Hermitian.
template <typename Scalar>
void fill_breather_matrix(const std::vector<BreatherParams>& bs, double a,
                          bool hyperbolic, double x, double y, double t,
                          MatrixTau& mt) {
  int n = static_cast<int>(bs.size());
  std::vector<BreatherPhases> ph(n);
  for (int j = 0; j < n; ++j)
    ph[j] = hyperbolic ? hyperbolic_phases(bs[j], a, x, y, t)
                       : harmonic_phases(bs[j], a, x, y, t);

  // per-row damping for hyperbolic phases; the determinant carries the sum
  // of all row phases, so the trigger is on the total
  std::vector<double> row_damp(n, 0.0);
  if (hyperbolic) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += 2.0 * std::abs(ph[j].gamma_big);
    if (total > kDetPhaseBudget)
      for (int j = 0; j < n; ++j) row_damp[j] = std::abs(ph[j].gamma_big);
  }
  for (int j = 0; j < n; ++j) mt.log_scale += 2.0 * row_damp[j];

  for (int r = 0; r < n; ++r) {
    const BreatherParams& bn = bs[r];
    double lam = bn.lambda;
    double sr = 2.0 * row_damp[r];
    double damp = sr == 0.0 ? 1.0 : std::exp(-sr);
    int idx = r * n + r;
    if (hyperbolic) {
      double g2 = 2.0 * ph[r].gamma_big;
      mt.k[idx] = ph[r].upsilon * damp - sinh_scaled(g2, sr) / (2.0 * lam);
      mt.dk_dx[idx] = ph[r].d_upsilon_dx * damp - cosh_scaled(g2, sr);
      mt.d2k_dx2[idx] = -2.0 * lam * sinh_scaled(g2, sr);
    } else {
      double g2 = 2.0 * ph[r].gamma_big;
      mt.k[idx] = ph[r].upsilon - std::sin(g2) / (2.0 * lam);
      mt.dk_dx[idx] = ph[r].d_upsilon_dx - std::cos(g2);
      mt.d2k_dx2[idx] = 2.0 * lam * std::sin(g2);
    }
    for (int c = 0; c < n; ++c) {
      if (c == r) continue;
      const BreatherParams& bk = bs[c];
      double dm = bn.mu - bk.mu;
      double lm = bn.lambda - bk.lambda;
      double lp = bn.lambda + bk.lambda;
      double sign = hyperbolic ? -1.0 : 1.0;
      double Dm = a * dm * dm + sign * lm * lm;
      double Dp = a * dm * dm + sign * lp * lp;
      auto denom_bad = [](double d, double ref) {
        return std::abs(d) <= 1e-12 * std::max(1.0, ref);
      };
      if (denom_bad(Dm, dm * dm + lm * lm) || denom_bad(Dp, dm * dm + lp * lp))
        throw std::domain_error("tau_matrix: vanishing pair denominator (" +
                                std::to_string(r) + "," + std::to_string(c) + ")");
      double ss = row_damp[r] + row_damp[c];
      double dphase = ph[r].gamma_big - ph[c].gamma_big;
      double sphase = ph[r].gamma_big + ph[c].gamma_big;
      Scalar argD, argS, alpha_c;
      if constexpr (std::is_same_v<Scalar, double>) {
        argD = dphase - (bn.chi + bk.chi) / 2.0;
        argS = sphase - (bn.chi - bk.chi) / 2.0;
        alpha_c = 1.0;
      } else {
        argD = Scalar(dphase, -(bn.chi + bk.chi) / 2.0);
        argS = Scalar(sphase, -(bn.chi - bk.chi) / 2.0);
        alpha_c = Scalar(0.0, 1.0);
      }
      int idx2 = r * n + c;
      if (hyperbolic) {
        using std::cosh;
        using std::sinh;
        Scalar shD = sinh_scaled(argD, ss), chD = cosh_scaled(argD, ss);
        Scalar shS = sinh_scaled(argS, ss), chS = cosh_scaled(argS, ss);
        mt.k[idx2] = (-lm * shD - alpha_c * dm * chD) / Dm +
                     (lp * shS + alpha_c * dm * chS) / Dp;
        mt.dk_dx[idx2] = (-lm * lm * chD - alpha_c * dm * lm * shD) / Dm +
                         (lp * lp * chS + alpha_c * dm * lp * shS) / Dp;
        mt.d2k_dx2[idx2] = (-lm * lm * lm * shD - alpha_c * dm * lm * lm * chD) / Dm +
                           (lp * lp * lp * shS + alpha_c * dm * lp * lp * chS) / Dp;
      } else {
        using std::cos;
        using std::sin;
        Scalar snD = sin(argD), csD = cos(argD);
        Scalar snS = sin(argS), csS = cos(argS);
        mt.k[idx2] = (lm * snD - alpha_c * dm * csD) / Dm -
                     (lp * snS - alpha_c * dm * csS) / Dp;
        mt.dk_dx[idx2] = (lm * lm * csD + alpha_c * dm * lm * snD) / Dm -
                         (lp * lp * csS + alpha_c * dm * lp * snS) / Dp;
        mt.d2k_dx2[idx2] = (lm * lm * (-lm * snD + alpha_c * dm * csD)) / Dm -
                           (lp * lp * (-lp * snS + alpha_c * dm * csS)) / Dp;
      }
    }
  }
}

}  // namespace

MatrixTau tau_matrix(const BreatherSuperpositionParams& params, AlphaSign alpha,
                     double x, double y, double t) {
  const auto& bs = params.breathers;
  int n = static_cast<int>(bs.size());
  if (n == 0) throw std::invalid_argument("tau_matrix: empty breather superposition");
  BreatherFamily fam = bs[0].family;
  for (const auto& b : bs)
    if (b.family != fam) throw std::invalid_argument("tau_matrix: mixed families");
  for (const auto& b : bs)
    if (b.lambda == 0.0) throw std::invalid_argument("tau_matrix: lambda = 0");

  MatrixTau mt;
  mt.n = n;
  mt.k.resize(n * n);
  mt.dk_dx.resize(n * n);
  mt.d2k_dx2.resize(n * n);

  if (fam == BreatherFamily::Cosh) {
    if (n > 1)
      throw std::invalid_argument("tau_matrix: the cosh family has no N>1 superposition");
    TauEvaluation ev = tau_breather(bs[0], AlphaSign::PlusOne, x, y, t);
    double two_l = 2.0 * bs[0].lambda;
    mt.is_complex = false;
    mt.log_scale = ev.log_scale;
    mt.k[0] = ev.tau / two_l;
    mt.dk_dx[0] = ev.d_tau_dx / two_l;
    mt.d2k_dx2[0] = ev.d2_tau_dx2 / two_l;
    return mt;
  }

  double a = alpha_squared(alpha);
  bool hyperbolic = fam == BreatherFamily::Hyperbolic;
  mt.is_complex = (alpha == AlphaSign::MinusOne) && n > 1;
  if (mt.is_complex)
    fill_breather_matrix<std::complex<double>>(bs, a, hyperbolic, x, y, t, mt);
  else
    fill_breather_matrix<double>(bs, a, hyperbolic, x, y, t, mt);
  return mt;
}

namespace {

template <typename Mat>
TauEvaluation log_det_impl(const Mat& K, const Mat& Kx, const Mat& Kxx,
                           double log_scale) {
  TauEvaluation ev;
  ev.log_scale = log_scale;

  Eigen::PartialPivLU<Mat> lu(K);
  auto det = lu.determinant();
  double rcond = lu.rcond();

  Mat Xi = lu.solve(Kx);
  auto t1 = Xi.trace();
  auto t2 = lu.solve(Kxx).trace();
  auto t3 = (Xi * Xi).trace();

  ev.tau = std::real(det);
  ev.d_tau_dx = std::real(det * t1);
  ev.d2_tau_dx2 = std::real(det * (t2 - t3 + t1 * t1));

  double scale = 1.0;
  for (int r = 0; r < K.rows(); ++r) {
    double row_max = 0.0;
    for (int c = 0; c < K.cols(); ++c)
      row_max = std::max(row_max, std::abs(K(r, c)));
    scale *= row_max;
  }
  ev.scale = scale;
  ev.near_singular = !std::isfinite(ev.tau) || std::abs(ev.tau) <= kSigmaTol * scale ||
                     !(rcond > kRcondFloor);
  return ev;
}

}  // namespace

TauEvaluation log_det_derivatives(const MatrixTau& mt) {
  int n = mt.n;
  if (n == 0) throw std::invalid_argument("log_det_derivatives: empty matrix");
  if (mt.is_complex) {
    Eigen::MatrixXcd K(n, n), Kx(n, n), Kxx(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        K(r, c) = mt.k[r * n + c];
        Kx(r, c) = mt.dk_dx[r * n + c];
        Kxx(r, c) = mt.d2k_dx2[r * n + c];
      }
    return log_det_impl(K, Kx, Kxx, mt.log_scale);
  }
  Eigen::MatrixXd K(n, n), Kx(n, n), Kxx(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      K(r, c) = mt.k[r * n + c].real();
      Kx(r, c) = mt.dk_dx[r * n + c].real();
      Kxx(r, c) = mt.d2k_dx2[r * n + c].real();
    }
  return log_det_impl(K, Kx, Kxx, mt.log_scale);
}

TauEvaluation tau_of_spec(const WaveSpec& spec, double x, double y, double t) {
  if (const auto* w = std::get_if<SolitonWallParams>(&spec.params))
    return tau_wall(*w, spec.alpha, x, y, t);
  if (const auto* b = std::get_if<BreatherParams>(&spec.params))
    return tau_breather(*b, spec.alpha, x, y, t);
  if (const auto* ws = std::get_if<WallSuperpositionParams>(&spec.params))
    return log_det_derivatives(tau_matrix(*ws, spec.alpha, x, y, t));
  const auto& bsup = std::get<BreatherSuperpositionParams>(spec.params);
  return log_det_derivatives(tau_matrix(bsup, spec.alpha, x, y, t));
}

}  // namespace kpw
