// Tau functions of every solution family, their analytic x-derivatives up
// to second order, and the N x N determinant route with derivative traces.
//
// Every evaluation is reported in a factored form tau_true = exp(log_scale)
// * tau so that huge exponential phases never overflow; the solution value
// 2 d^2/dx^2 ln(tau) only ever uses ratios, which the factor cancels out of.

#ifndef KPWAVE_TAU_KERNEL_HPP
#define KPWAVE_TAU_KERNEL_HPP

#include <complex>
#include <vector>

#include "kpwave/wave_model.hpp"

namespace kpw {

// Threshold for the near-singular flag: |tau| <= kSigmaTol * scale, where
// scale is the largest additive term that builds tau at the point.
inline constexpr double kSigmaTol = 1e-8;

// Reciprocal-condition floor below which the determinant route declares the
// matrix singular to working precision.
inline constexpr double kRcondFloor = 1e-12;

struct TauEvaluation {
  double tau = 0.0;         // tau_true * exp(-log_scale)
  double d_tau_dx = 0.0;    // same factoring
  double d2_tau_dx2 = 0.0;  // same factoring
  double log_scale = 0.0;   // 0 unless the evaluation was rescaled
  double scale = 0.0;       // largest additive term (factored like tau)
  bool near_singular = false;

  bool rescaled() const { return log_scale != 0.0; }
};

// N x N tau matrix with elementwise analytic x-derivatives.  Entries are
// stored as complex numbers; they are purely real except for breather
// superpositions with alpha^2 = -1, where the matrix is Hermitian and the
// determinant stays real.
struct MatrixTau {
  int n = 0;
  bool is_complex = false;
  std::vector<std::complex<double>> k;         // row-major n*n
  std::vector<std::complex<double>> dk_dx;     // d/dx of each entry
  std::vector<std::complex<double>> d2k_dx2;   // d^2/dx^2 of each entry
  double log_scale = 0.0;  // det(K_true) = exp(log_scale) * det(K)

  std::complex<double> at(int row, int col) const { return k[row * n + col]; }
};

// Single soliton wall: tau = 1 + c/(p+q) * exp(theta).
TauEvaluation tau_wall(const SolitonWallParams& params, AlphaSign alpha,
                       double x, double y, double t);

// Single breather of any family.
TauEvaluation tau_breather(const BreatherParams& params, AlphaSign alpha,
                           double x, double y, double t);

// Wall superposition matrix A_mn = delta_mn + c_n exp(theta_n)/(p_n + q_m).
MatrixTau tau_matrix(const WallSuperpositionParams& params, AlphaSign alpha,
                     double x, double y, double t);

// Breather superposition matrix.  Diagonal entries are the single-breather
// tau over 2*lambda_n; off-diagonal entries couple the pair phases
// Gamma_n -+ Gamma_k with chi/2 phase offsets carried by the same alpha
// convention as the single-breather formulas.
// Throws std::domain_error when a pair denominator vanishes.
MatrixTau tau_matrix(const BreatherSuperpositionParams& params, AlphaSign alpha,
                     double x, double y, double t);

// det K and the x-derivatives of ln det K via one LU factorization:
//   d/dx ln det K   = tr(K^-1 Kx)
//   d2/dx2 ln det K = tr(K^-1 Kxx) - tr((K^-1 Kx)^2)
// packaged as tau-derivatives so downstream code can treat both routes
// uniformly.  Singular-to-working-precision K sets near_singular.
TauEvaluation log_det_derivatives(const MatrixTau& mt);

// Dispatch: tau of any WaveSpec (scalar or determinant route).
TauEvaluation tau_of_spec(const WaveSpec& spec, double x, double y, double t);

}  // namespace kpw

#endif  // KPWAVE_TAU_KERNEL_HPP
