#include "hwq/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hwq::special {

namespace {

// Lanczos approximation, g = 7, 9 coefficients (Godfrey's table). Relative
// error below 1e-13 for positive real arguments.
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double gamma_positive(double x) {
  // valid for x >= 0.5
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x - 1.0 + i);
  const double t = x + 6.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x - 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma_fn(double x) {
  if (x >= 0.5) return gamma_positive(x);
  if (x <= 0.0 && x == std::floor(x))
    throw std::invalid_argument("gamma_fn: pole at nonpositive integer");
  // Euler reflection; sin(pi x) via sinpi-style argument reduction keeps the
  // relative error at large negative x.
  const double r = x - std::floor(x);
  const double sinpix = (static_cast<long long>(std::floor(x)) % 2 == 0)
                            ? std::sin(std::numbers::pi * r)
                            : -std::sin(std::numbers::pi * r);
  return std::numbers::pi / (sinpix * gamma_positive(1.0 - x));
}

double c_alpha(double alpha) {
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("c_alpha: alpha must lie in the open interval (1,2)");
  return (1.0 - alpha) / (gamma_fn(2.0 - alpha) * std::cos(std::numbers::pi / 2.0 * alpha));
}

double c_bs(double B, double C_S, double alpha_S) {
  if (!(B > 0.0)) throw std::invalid_argument("c_bs: B must be positive");
  if (!(C_S > 0.0)) throw std::invalid_argument("c_bs: C_S must be positive");
  if (!(alpha_S > 1.0) || !(alpha_S < 2.0))
    throw std::invalid_argument("c_bs: alpha_S must lie in (1,2)");
  return -1.0 / C_S * std::pow(B, 3.0 - alpha_S) *
         std::pow((alpha_S - 1.0) / (3.0 - alpha_S), 2.0 - alpha_S) * (2.0 - alpha_S);
}

double hwr_rate(double B, double C_A, double alpha) {
  if (!(B > 0.0)) throw std::invalid_argument("hwr_rate: B must be positive");
  if (!(C_A > 0.0)) throw std::invalid_argument("hwr_rate: C_A must be positive");
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("hwr_rate: alpha must lie in (1,2)");
  return std::pow(B / (C_A * alpha * gamma_fn(-alpha)), 1.0 / (alpha - 1.0));
}

double dieker_constant(double c, double H, double beta) {
  if (!(c > 0.0)) throw std::invalid_argument("dieker_constant: c must be positive");
  if (!(H > 0.0) || !(H < 1.0))
    throw std::invalid_argument("dieker_constant: H must lie in (0,1)");
  if (!(beta > H)) throw std::invalid_argument("dieker_constant: beta must exceed H");
  return -0.5 * std::pow(c, 2.0 * H / beta) * std::pow(H / (beta - H), -2.0 * H / beta) *
         std::pow(beta / (beta - H), 2.0);
}

double gk_constant(double alpha_S, double C_S) {
  if (!(alpha_S > 1.0) || !(alpha_S < 2.0))
    throw std::invalid_argument("gk_constant: alpha_S must lie in (1,2)");
  if (!(C_S > 0.0)) throw std::invalid_argument("gk_constant: C_S must be positive");
  return 2.0 * C_S / ((alpha_S - 1.0) * (2.0 - alpha_S) * (3.0 - alpha_S));
}

LDConstants ld_constants(double B, double C_A, double C_S, double alpha) {
  LDConstants c;
  c.B = B;
  c.C_A = C_A;
  c.C_S = C_S;
  c.alpha = alpha;
  c.c_alpha = c_alpha(alpha);
  c.c_bs = c_bs(B, C_S, alpha);
  c.hwr_rate = hwr_rate(B, C_A, alpha);
  c.dieker = dieker_constant(B, (3.0 - alpha) / 2.0, 1.0);
  c.gk_const = gk_constant(alpha, C_S);
  return c;
}

}  // namespace hwq::special
