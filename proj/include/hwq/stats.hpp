#pragma once

// Small statistics toolkit shared by the estimators: moments with standard
// errors, quantiles, two-sample KS, least squares, exact Poisson tails, and
// an adaptive Simpson quadrature.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hwq::stats {

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);           // unbiased
double stderr_of_mean(std::span<const double> xs);
// Standard error of the sample variance via the fourth central moment.
double stderr_of_variance(std::span<const double> xs);

// Linear-interpolated quantile of an unsorted sample (type-7).
double quantile(std::vector<double> xs, double p);

// Quantile of a nonnegative-integer-level distribution given time mass per
// level, interpolating linearly inside the crossing level.
double weighted_level_quantile(std::span<const double> mass_at_level, double p);

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// P(Poisson(lambda) >= k), exact.
double poisson_tail(double lambda, std::uint64_t k);

double normal_cdf(double z);
double normal_sf(double z);

// Adaptive Simpson on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

}  // namespace hwq::stats
