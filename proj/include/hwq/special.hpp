#pragma once

// Special functions and the closed-form limit constants, with the algebraic
// cross-identities between them used as self-tests.

namespace hwq::special {

// Gamma function for real non-pole arguments: Lanczos approximation for
// x >= 0.5, Euler reflection Gamma(-t) = pi / (-t Gamma(t) sin(pi t)) below.
double gamma_fn(double x);

// C_alpha = (1 - alpha) / (Gamma(2-alpha) cos(pi alpha / 2)), alpha in (1,2).
// Also the right tail constant of the maximally skewed stable law.
double c_alpha(double alpha);

// C_{B,S} = -C_S^{-1} B^{3-aS} ((aS-1)/(3-aS))^{2-aS} (2-aS), negative.
double c_bs(double B, double C_S, double alpha_S);

// Exponential decay rate (B / (C_A alpha Gamma(-alpha)))^{1/(alpha-1)} of the
// drifted spectrally negative stable supremum.
double hwr_rate(double B, double C_A, double alpha);

// -1/2 c^{2H/beta} (H/(beta-H))^{-2H/beta} (beta/(beta-H))^2, the Gaussian
// supremum large-deviation prefactor.
double dieker_constant(double c, double H, double beta);

// 2 C_S / ((aS-1)(2-aS)(3-aS)), the t^{3-aS} variance growth coefficient of a
// heavy-tailed equilibrium renewal process.
double gk_constant(double alpha_S, double C_S);

struct LDConstants {
  double B = 0.0;
  double C_A = 0.0;
  double C_S = 0.0;
  double alpha = 0.0;
  double c_alpha = 0.0;
  double c_bs = 0.0;       // negative
  double hwr_rate = 0.0;   // positive
  double dieker = 0.0;     // negative, at H = (3-alpha)/2, beta = 1, c = B
  double gk_const = 0.0;   // positive
};

// Bundle per (B, C_A, C_S, alpha) configuration; alpha plays both the
// arrival-tail and service-tail role. Satisfies c_bs == dieker / gk_const.
LDConstants ld_constants(double B, double C_A, double C_S, double alpha);

}  // namespace hwq::special
