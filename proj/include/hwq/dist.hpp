#pragma once

// Mean-one input distributions: samplers, equilibrium (residual) laws, exact
// moments, and the alpha-stable variate generator.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hwq/rng.hpp"

namespace hwq::dist {

enum class Family { exponential, pareto_mean_one, deterministic, tabulated };

// A distribution law normalized to mean one. The Pareto family is the pure
// power law P(X > x) = (x_m/x)^alpha above its scale x_m = (alpha-1)/alpha,
// so the tail constant C = x_m^alpha is available in closed form.
class DistributionSpec {
 public:
  static DistributionSpec exponential(double rate = 1.0);
  static DistributionSpec pareto_mean_one(double alpha);
  static DistributionSpec deterministic(double value = 1.0);
  // Inverse-CDF table: (u, x) pairs with u increasing in [0,1]; sampled by
  // linear interpolation, so the trapezoid mean is the exact mean and must
  // equal 1 to 1e-12. An optional residual table enables the equilibrium law.
  static DistributionSpec tabulated(std::vector<std::pair<double, double>> inverse_cdf,
                                    std::vector<std::pair<double, double>> residual = {});

  // Grammar: "exp", "exp(rate=1)", "det", "det(value=1)", "pareto(alpha=1.5)".
  static DistributionSpec parse(std::string_view text);

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  double pareto_scale() const { return pareto_scale_; }

  double sample(RngStream& rng) const;
  double sample_equilibrium(RngStream& rng) const;

  // Closed forms where they exist.
  double mean() const { return 1.0; }
  double variance() const;                    // +inf when the tail index <= 2
  double frac_moment(double eps) const;       // E[X^{1+eps}]; +inf if 1+eps >= alpha
  double laplace(double theta) const;         // E[exp(-theta X)]
  std::optional<double> tail_constant() const;  // lim x^alpha P(X > x)
  std::optional<double> tail_index() const;

  std::string to_string() const;

 private:
  DistributionSpec() = default;
  Family family_ = Family::exponential;
  double alpha_ = 0.0;          // pareto tail index
  double pareto_scale_ = 0.0;   // x_m
  std::vector<std::pair<double, double>> table_;
  std::vector<std::pair<double, double>> residual_table_;
};

struct MomentSummary {
  double mean = 1.0;
  double variance = 0.0;        // +inf allowed
  double sigma_sq = 0.0;        // alias of variance in the mean-one setting
  double eps = 0.0;
  double frac_moment = 1.0;     // E[X^{1+eps}]
  double theta = 0.0;
  double laplace = 1.0;         // E[exp(-theta X)]
  std::optional<double> tail_constant;
  std::optional<double> tail_index;
};

// eps in (0,1]; theta >= 0. Infinite moments are reported as +inf.
MomentSummary moments(const DistributionSpec& spec, double eps, double theta);

// S_alpha(sigma, beta, mu) draw for alpha in (1,2), in the parametrization
// with characteristic function
//   exp(-(sigma|t|)^alpha (1 - i beta sgn(t) tan(pi alpha/2)) + i mu t).
// Chambers-Mallows-Stuck: with V ~ U(-pi/2,pi/2), W ~ Exp(1),
//   B = atan(beta tan(pi alpha/2))/alpha, S = (1+beta^2 tan^2(pi alpha/2))^(1/(2 alpha)),
//   X = S sin(alpha(V+B)) cos(V)^(-1/alpha) (cos(V - alpha(V+B))/W)^((1-alpha)/alpha)
// gives S_alpha(1,beta,0) in exactly this parametrization (no extra shift is
// needed for alpha != 1), then X -> sigma X + mu.
double sample_stable(double alpha, double sigma, double beta, double mu, RngStream& rng);

}  // namespace hwq::dist
