#pragma once

// FCFS GI/GI/n discrete-event simulation under the n - B n^{1/alpha} arrival
// scaling, the exact M/M/n birth-death oracle, and the GI/D/n fast path.

#include <cstdint>
#include <string>
#include <vector>

#include "hwq/dist.hpp"
#include "hwq/parallel.hpp"

namespace hwq::queuesim {

double lambda_n(int n, double B, double alpha);

struct QueueConfig {
  QueueConfig(int n, double B, double alpha, dist::DistributionSpec arrival,
              dist::DistributionSpec service);

  int n;
  double B;
  double alpha;       // scaling index in (1,2]
  dist::DistributionSpec arrival;
  dist::DistributionSpec service;

  double lambda() const { return lambda_n(n, B, alpha); }
  double scale() const;  // n^{1/alpha}
};

struct TailRow {
  double x = 0.0;          // normalized threshold: P(L >= x n^{1/alpha})
  int level = 0;           // the integer queue-length cutoff actually used
  double prob = 0.0;       // time-average estimate
  double se = 0.0;
  double prob_arrival = 0.0;  // arrival-sampled estimate (PASTA diagnostic)
  double se_arrival = 0.0;
};

struct WaitSummary {
  double mean = 0.0;
  double se = 0.0;
  double max = 0.0;
  std::uint64_t jobs = 0;
};

struct QueueDiagnostics {
  double horizon_used = 0.0;
  int doublings = 0;
  bool halves_agree = true;  // first vs second half of the stats window
  bool unstable = false;
  double busy_fraction = 0.0;
  std::uint64_t censored = 0;  // unused here; kept for record symmetry
};

struct TraceRow {
  double time = 0.0;
  char event = '?';  // 'a' arrival, 's' service start, 'd' departure
  std::uint64_t job = 0;
  int busy = 0;
  int waiting = 0;
};

struct QueueResult {
  std::vector<TailRow> tails;
  double warmup_fraction = 0.0;
  std::uint64_t replications = 0;
  WaitSummary waits;
  std::vector<double> time_at_level;  // pooled post-warmup time mass per L level
  QueueDiagnostics diag;
  std::vector<TraceRow> trace;        // filled only when tracing
};

struct SimOptions {
  double horizon = 0.0;           // 0 = 50 sqrt(n) mean service times
  double warmup_fraction = 0.2;
  std::uint64_t reps = 30;
  std::uint64_t seed = 1;
  std::vector<double> thresholds = {0.25, 0.5, 1.0, 2.0};  // normalized x grid
  int max_doublings = 2;          // auto-doubling when half-window estimates disagree
  bool trace = false;             // record the event log of replication 0
  ParallelOptions parallel;
};

QueueResult simulate_queue(const QueueConfig& config, const SimOptions& opt);

// Half-window agreement / instability classifier, exposed for testing.
bool halves_agree(const std::vector<double>& half1, const std::vector<double>& half2,
                  const std::vector<double>& se1, const std::vector<double>& se2);
bool detect_instability(double busy_fraction, double first_half_mean_L,
                        double second_half_mean_L);

// Exact M/M/n steady state: pi_k = pi_0 lam^k / k! up to n, geometric beyond.
class MmnDistribution {
 public:
  MmnDistribution(int n, double lam);
  int n() const { return n_; }
  double rho() const { return rho_; }
  double pmf_queue(std::uint64_t k) const;      // P(Q = k), total jobs in system
  double ccdf_queue(std::uint64_t k) const;     // P(Q >= k)
  double ccdf_waiting(std::uint64_t k) const;   // P(L >= k), L = (Q-n)^+
 private:
  int n_;
  double lam_, rho_;
  std::vector<double> pmf_;  // k = 0..n
  double tail_at_n_;         // P(Q >= n)
};

MmnDistribution mmn_exact(int n, double lam);

struct GidnOptions {
  std::uint64_t reps = 10;
  std::uint64_t warmup_blocks = 400;   // blocks of n arrivals
  std::uint64_t snapshots = 5;         // W snapshots per replication
  std::uint64_t snapshot_stride = 25;  // blocks between snapshots
  std::uint64_t seed = 1;
  std::vector<double> thresholds = {0.25, 0.5, 1.0, 2.0};
  ParallelOptions parallel;
};

struct GidnResult {
  std::vector<double> l_normalized;  // samples of L / n^{1/alpha}
  std::vector<double> w_normalized;  // samples of n^{1 - 1/alpha} W
  std::vector<TailRow> tails;        // time-stationary law via the counting identity
  std::uint64_t replications = 0;
};

// Deterministic service, heavy-tailed arrivals: per-job waits from the n-fold
// Lindley recursion W_j = (W_{j-n} + 1 - (T_j - T_{j-n}))^+ (no overtaking),
// queue lengths via Q ~ A(lambda (1 + W)) with an independent equilibrium
// arrival count.
GidnResult gidn_tail(const QueueConfig& config, const GidnOptions& opt);

}  // namespace hwq::queuesim
