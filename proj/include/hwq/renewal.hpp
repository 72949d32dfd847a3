#pragma once

// Ordinary/equilibrium renewal processes, pooled superpositions, and the
// explicit renewal-function and variance bounds.

#include <cstdint>
#include <span>
#include <vector>

#include "hwq/dist.hpp"
#include "hwq/parallel.hpp"
#include "hwq/rng.hpp"

namespace hwq::renewal {

enum class Mode { ordinary, equilibrium };

struct RenewalStream {
  RenewalStream(dist::DistributionSpec spec, Mode mode, RngStream& rng);
  void advance(RngStream& rng);  // move next_event past one renewal

  dist::DistributionSpec spec;
  Mode mode;
  double next_event = 0.0;
  std::uint64_t count = 0;  // renewals strictly before next_event
};

struct PooledPath {
  int n = 0;
  std::vector<double> times;     // sample grid
  std::vector<double> centered;  // sum_i N_i(t) - n t at grid times
  double min_seen = 0.0;         // running extremes of the centered process
  double max_seen = 0.0;
  std::vector<std::uint64_t> per_stream_counts;  // at the horizon
  std::uint64_t total_count = 0;
};

// Event-driven superposition of n equilibrium renewal streams over [0,horizon].
PooledPath pooled_centered_path(int n, const dist::DistributionSpec& spec, double horizon,
                                std::span<const double> grid, RngStream& rng);

struct EstimateRow {
  double t = 0.0;
  double value = 0.0;
  double se = 0.0;
  std::uint64_t reps = 0;
};

struct EstimateOptions {
  std::uint64_t reps = 10000;
  std::uint64_t seed = 1;
  ParallelOptions parallel;
};

// E[N_o(t)] on a grid (ordinary process), replication mean +- s.e.
std::vector<EstimateRow> estimate_renewal_fn(const dist::DistributionSpec& spec,
                                             std::span<const double> t_grid,
                                             const EstimateOptions& opt);

// Var[N_1(t)] on a grid (equilibrium process). reps = 0 picks the default
// schedule min(1e5, 200 t^{1/4}) per grid point: the estimator's own noise
// grows with t for heavy tails, so large t needs more replications.
std::vector<EstimateRow> estimate_variance(const dist::DistributionSpec& spec,
                                           std::span<const double> t_grid,
                                           const EstimateOptions& opt);

std::uint64_t default_variance_reps(double t);

// (2 E[S^{1+eps}])^{1/eps} (1 + t^{1/(1+eps)}) >= E[N_o(t)] + 1 - t.
double farrell_bound(double eps, double frac_moment, double t);

// (4 E[S^{1+eps}])^{1/eps} (t + t^{1 + 1/(1+eps)}) >= Var[N_1(t)].
double variance_bound(double eps, double frac_moment, double t);

// The integral representation Var[N_1(t)] = 2 int_0^t (E[N_o(s)] + 1 - s - 1/2) ds,
// evaluated by trapezoid over renewal-function estimates (rows must cover
// (0, t]; the integrand at s=0 is 1/2 exactly).
double variance_integral_route(std::span<const EstimateRow> renewal_fn_rows, double t);

}  // namespace hwq::renewal
