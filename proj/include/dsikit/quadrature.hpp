#pragma once

#include <string>
#include <vector>

namespace dsikit {

/// Phi(z)(1 - Phi(z)) / phi(z): the integrand of E_std = E[Phi(1-Phi)/phi^2]
/// with respect to dz. Stable for all |z| through the Mills ratio.
double e_std_integrand(double z);

/// (1 - Phi(z)) / phi(z) for z >= 0.
double mills_ratio(double z);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool ok = false;       // scheme reported success
  std::string message;   // failure reason, if any
};

/// Integral of e_std_integrand over [-t, t].
QuadratureResult e_std_truncated_tanh_sinh(double t);
QuadratureResult e_std_truncated_gauss_kronrod(double t);

/// E[F(1-F)/rho^2] for N(0, sigma2) restricted to |x| <= t * sigma, integrated
/// in x directly (tanh-sinh). Equals sigma2 times the standard value on [-t, t].
QuadratureResult e_factor_truncated(double sigma2, double t);

/// Attempts at the untruncated integral: tanh-sinh over the real line, and
/// Gauss-Hermite on the importance-reweighted integrand with `nodes` nodes.
QuadratureResult e_std_full_tanh_sinh();
QuadratureResult e_std_full_gauss_hermite(int nodes);

struct EStdAnalysis {
  std::vector<double> cutoffs;            // t values
  std::vector<double> tanh_sinh;          // truncated integrals
  std::vector<double> gauss_kronrod;
  double growth_per_doubling = 0.0;       // last I(2t) - I(t)
  bool divergent = false;
  double value = 0.0;                     // +inf when divergent
};

/// Computed once and cached.
const EStdAnalysis& e_std_analysis();

/// Standard-normal E-factor; +inf when the integral diverges.
double e_std();

}  // namespace dsikit
