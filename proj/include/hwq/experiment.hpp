#pragma once

// Experiment orchestration: result records with content hashes, CSV/JSON
// emission, and the study runners behind the command-line subcommands.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hwq/compare.hpp"
#include "hwq/dist.hpp"
#include "hwq/queuesim.hpp"
#include "hwq/renewal.hpp"

namespace hwq::cli {

enum class Status { ok = 0, fail = 1, soft = 2 };  // doubles as the process exit code

struct ResultRecord {
  nlohmann::json config;   // effective merged configuration echo
  nlohmann::json results;
  Status status = Status::ok;
  std::vector<std::string> notices;

  // FNV-1a 64 over the canonical (key-sorted) serialization.
  std::string content_hash() const;
  nlohmann::json to_json() const;
};

std::uint64_t fnv1a64(std::string_view bytes);

struct CsvColumn {
  std::string name;
  std::string description;
};

// Writes "# column <name>: <description>" schema lines, a header row, then data.
void write_csv(const std::string& path, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows);

// Same table as gnuplot-ready whitespace-separated data.
void write_dat(const std::string& path, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows);

// ---- scaling study -------------------------------------------------------

struct ScalingConfig {
  std::vector<int> n_grid;
  double B = 1.0;
  double alpha = 2.0;
  dist::DistributionSpec arrival = dist::DistributionSpec::exponential();
  dist::DistributionSpec service = dist::DistributionSpec::exponential();
  double quantile_p = 0.9;
  double horizon_multiplier = 50.0;  // horizon = multiplier * sqrt(n)
  std::uint64_t reps = 30;
  std::uint64_t seed = 1;
  int max_doublings = 2;
  ParallelOptions parallel;
};

// Quantiles of L / n^{1/alpha} per n plus spread statistics.
ResultRecord run_scaling_study(const ScalingConfig& cfg);

// ---- large-deviation slope ------------------------------------------------

struct LdSlopeResult {
  double gamma = 1.0;
  double slope = 0.0;
  double band = 0.0;          // +- 2 bootstrap standard deviations
  std::size_t points = 0;
  bool insufficient_tail = false;
};

// Least-squares fit of log P(X > x) against x^gamma over the sample's
// 50th-99.5th percentile range; needs >= 1e4 samples.
LdSlopeResult run_ld_slope(const std::vector<double>& samples, double gamma,
                           std::uint64_t bootstrap = 200, std::uint64_t seed = 1);

// ---- dominance sandwich ----------------------------------------------------

struct DominanceConfig {
  queuesim::QueueConfig queue;
  std::vector<double> x_grid = {0.5, 1.0, 2.0};
  queuesim::SimOptions sim;
  compare::SupOptions sup;
  compare::LowerBoundOptions lower;
  std::uint64_t seed = 1;
};

ResultRecord run_dominance(const DominanceConfig& cfg);

// ---- Reed comparison -------------------------------------------------------

struct ReedCompareConfig {
  queuesim::QueueConfig queue;  // deterministic service, Pareto arrivals
  queuesim::GidnOptions gidn;
  compare::WalkOptions walk;
  double ks_threshold = 0.1;
};

ResultRecord run_reed_compare(const ReedCompareConfig& cfg);

// ---- renewal verification ---------------------------------------------------

struct VerifyRenewalConfig {
  dist::DistributionSpec spec = dist::DistributionSpec::exponential();
  std::vector<double> t_grid = {0.5, 1.0, 10.0, 100.0, 1000.0};
  std::uint64_t reps = 10000;        // renewal-function replications
  std::uint64_t variance_reps = 0;   // 0 = default schedule
  std::uint64_t seed = 1;
  ParallelOptions parallel;
};

// Checks the renewal-function and variance bounds (estimate - 3 s.e. <= bound)
// and reports the integral-route variance alongside the direct estimate.
ResultRecord run_verify_renewal(const VerifyRenewalConfig& cfg);

}  // namespace hwq::cli
