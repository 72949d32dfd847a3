#include "hwq/queuesim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>

#include "hwq/stats.hpp"

namespace hwq::queuesim {

double lambda_n(int n, double B, double alpha) {
  if (n < 1) throw std::invalid_argument("lambda_n: n must be >= 1");
  if (!(B > 0.0)) throw std::invalid_argument("lambda_n: B must be positive");
  if (!(alpha > 1.0) || alpha > 2.0)
    throw std::invalid_argument("lambda_n: alpha must lie in (1,2]");
  if (!(static_cast<double>(n) > std::pow(B, alpha / (alpha - 1.0))))
    throw std::invalid_argument("lambda_n: need n > B^{alpha/(alpha-1)} for a positive rate");
  return static_cast<double>(n) - B * std::pow(static_cast<double>(n), 1.0 / alpha);
}

QueueConfig::QueueConfig(int n_, double B_, double alpha_, dist::DistributionSpec a,
                         dist::DistributionSpec s)
    : n(n_), B(B_), alpha(alpha_), arrival(std::move(a)), service(std::move(s)) {
  (void)lambda_n(n, B, alpha);  // validates the parameter set
}

double QueueConfig::scale() const { return std::pow(static_cast<double>(n), 1.0 / alpha); }

namespace {

struct RepStats {
  std::vector<double> occ;        // time fraction with L >= level, full window
  std::vector<double> occ_h1;     // first half
  std::vector<double> occ_h2;     // second half
  std::vector<double> arr_frac;   // arrival-sampled fraction
  std::vector<double> time_at_level;
  double wait_mean = 0.0;
  double wait_max = 0.0;
  std::uint64_t wait_jobs = 0;
  double busy_fraction = 0.0;
  double mean_L_h1 = 0.0;
  double mean_L_h2 = 0.0;
};

std::vector<int> integer_levels(const std::vector<double>& thresholds, double scale) {
  std::vector<int> lv(thresholds.size());
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    if (!(thresholds[j] >= 0.0))
      throw std::invalid_argument("simulate_queue: negative threshold");
    lv[j] = static_cast<int>(std::ceil(thresholds[j] * scale - 1e-9));
    lv[j] = std::max(lv[j], 1);  // P(L >= 0) = 1 carries no information
  }
  return lv;
}

RepStats one_replication(const QueueConfig& cfg, double horizon, double warmup,
                         const std::vector<int>& levels, RngStream rng,
                         std::vector<TraceRow>* trace) {
  const double lam = cfg.lambda();
  const int n = cfg.n;

  RepStats st;
  st.occ.assign(levels.size(), 0.0);
  st.occ_h1.assign(levels.size(), 0.0);
  st.occ_h2.assign(levels.size(), 0.0);
  st.arr_frac.assign(levels.size(), 0.0);

  std::priority_queue<double, std::vector<double>, std::greater<double>> departures;
  std::deque<std::pair<double, std::uint64_t>> fifo;  // (arrival time, job id) of waiting jobs
  int busy = 0;
  double t = 0.0;
  double next_arrival = cfg.arrival.sample_equilibrium(rng) / lam;
  std::uint64_t arrived = 0, departed = 0, next_job = 0;
  std::uint64_t arrivals_seen = 0;
  std::vector<std::uint64_t> arr_count(levels.size(), 0);

  const double mid = warmup + 0.5 * (horizon - warmup);
  double busy_time = 0.0;
  double wait_sum = 0.0;
  double L_time_h1 = 0.0, L_time_h2 = 0.0;

  auto account = [&](double from, double to, int waiting) {
    const double lo = std::max(from, warmup);
    if (to <= lo) return;
    const double span = to - lo;
    for (std::size_t j = 0; j < levels.size(); ++j)
      if (waiting >= levels[j]) st.occ[j] += span;
    const double lo1 = lo, hi1 = std::min(to, mid);
    if (hi1 > lo1) {
      for (std::size_t j = 0; j < levels.size(); ++j)
        if (waiting >= levels[j]) st.occ_h1[j] += hi1 - lo1;
      L_time_h1 += waiting * (hi1 - lo1);
    }
    const double lo2 = std::max(lo, mid);
    if (to > lo2) {
      for (std::size_t j = 0; j < levels.size(); ++j)
        if (waiting >= levels[j]) st.occ_h2[j] += to - lo2;
      L_time_h2 += waiting * (to - lo2);
    }
    if (static_cast<std::size_t>(waiting) >= st.time_at_level.size())
      st.time_at_level.resize(static_cast<std::size_t>(waiting) + 1, 0.0);
    st.time_at_level[static_cast<std::size_t>(waiting)] += span;
    busy_time += static_cast<double>(busy) * span;
  };

  while (true) {
    const double next_departure = departures.empty() ? horizon + 1.0 : departures.top();
    const double t_next = std::min(next_arrival, next_departure);
    if (t_next >= horizon) {
      account(t, horizon, static_cast<int>(fifo.size()));
      break;
    }
    account(t, t_next, static_cast<int>(fifo.size()));
    t = t_next;
    if (next_arrival <= next_departure) {
      ++arrived;
      const std::uint64_t job = next_job++;
      if (t >= warmup) {
        ++arrivals_seen;
        for (std::size_t j = 0; j < levels.size(); ++j)
          if (static_cast<int>(fifo.size()) >= levels[j]) ++arr_count[j];
      }
      if (trace) trace->push_back({t, 'a', job, busy, static_cast<int>(fifo.size())});
      if (busy < n) {
        ++busy;
        departures.push(t + cfg.service.sample(rng));
        if (t >= warmup) {
          ++st.wait_jobs;  // zero wait
        }
        if (trace) trace->push_back({t, 's', job, busy, static_cast<int>(fifo.size())});
      } else {
        fifo.emplace_back(t, job);
      }
      next_arrival = t + cfg.arrival.sample(rng) / lam;
    } else {
      departures.pop();
      ++departed;
      if (trace) trace->push_back({t, 'd', 0, busy, static_cast<int>(fifo.size())});
      if (!fifo.empty()) {
        const auto [t_arr, job] = fifo.front();
        fifo.pop_front();
        departures.push(t + cfg.service.sample(rng));
        if (t_arr >= warmup) {
          const double w = t - t_arr;
          wait_sum += w;
          st.wait_max = std::max(st.wait_max, w);
          ++st.wait_jobs;
        }
        if (trace) trace->push_back({t, 's', job, busy, static_cast<int>(fifo.size())});
      } else {
        --busy;
      }
    }
    // conservation: every job is exactly one of departed / in service / waiting
    if (arrived != departed + static_cast<std::uint64_t>(busy) + fifo.size())
      throw std::logic_error("simulate_queue: conservation violated");
  }

  const double window = horizon - warmup;
  const double half = 0.5 * window;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    st.occ[j] /= window;
    st.occ_h1[j] /= half;
    st.occ_h2[j] /= half;
    st.arr_frac[j] =
        arrivals_seen > 0 ? static_cast<double>(arr_count[j]) / static_cast<double>(arrivals_seen)
                          : 0.0;
  }
  st.wait_mean = st.wait_jobs > 0 ? wait_sum / static_cast<double>(st.wait_jobs) : 0.0;
  st.busy_fraction = busy_time / (window * static_cast<double>(n));
  st.mean_L_h1 = L_time_h1 / half;
  st.mean_L_h2 = L_time_h2 / half;
  return st;
}

}  // namespace

bool halves_agree(const std::vector<double>& half1, const std::vector<double>& half2,
                  const std::vector<double>& se1, const std::vector<double>& se2) {
  for (std::size_t j = 0; j < half1.size(); ++j) {
    const double se = std::sqrt(se1[j] * se1[j] + se2[j] * se2[j]);
    if (std::abs(half1[j] - half2[j]) > 2.0 * se && se > 0.0) return false;
  }
  return true;
}

bool detect_instability(double busy_fraction, double first_half_mean_L,
                        double second_half_mean_L) {
  // a valid config always has lambda < n; persistent saturation plus a queue
  // that keeps growing after the warmup indicates a misconfigured input
  return busy_fraction >= 0.999 && second_half_mean_L > 2.0 * first_half_mean_L &&
         second_half_mean_L > 1.0;
}

QueueResult simulate_queue(const QueueConfig& cfg, const SimOptions& opt) {
  if (opt.reps < 2) throw std::invalid_argument("simulate_queue: need >= 2 replications");
  if (!(opt.warmup_fraction >= 0.0) || opt.warmup_fraction >= 1.0)
    throw std::invalid_argument("simulate_queue: warmup fraction outside [0,1)");
  if (opt.thresholds.empty()) throw std::invalid_argument("simulate_queue: no thresholds");

  const double scale = cfg.scale();
  const auto levels = integer_levels(opt.thresholds, scale);
  double horizon = opt.horizon > 0.0 ? opt.horizon : 50.0 * std::sqrt(static_cast<double>(cfg.n));

  QueueResult result;
  int doublings = 0;
  while (true) {
    const double warmup = opt.warmup_fraction * horizon;
    std::vector<TraceRow> trace;
    auto stats_per_rep = run_replications<RepStats>(
        opt.reps,
        [&](std::size_t r) {
          return one_replication(cfg, horizon, warmup, levels,
                                 RngStream(opt.seed, substream_id(r, 0)),
                                 (opt.trace && r == 0) ? &trace : nullptr);
        },
        opt.parallel);

    const std::size_t J = levels.size();
    std::vector<double> col(opt.reps);
    auto column = [&](auto getter) {
      for (std::size_t r = 0; r < opt.reps; ++r) col[r] = getter(stats_per_rep[r]);
      return std::pair<double, double>(stats::mean(col), stats::stderr_of_mean(col));
    };

    result = QueueResult{};
    result.warmup_fraction = opt.warmup_fraction;
    result.replications = opt.reps;
    result.trace = std::move(trace);
    std::vector<double> h1(J), h2(J), se1(J), se2(J);
    for (std::size_t j = 0; j < J; ++j) {
      TailRow row;
      row.x = opt.thresholds[j];
      row.level = levels[j];
      std::tie(row.prob, row.se) = column([j](const RepStats& s) { return s.occ[j]; });
      std::tie(row.prob_arrival, row.se_arrival) =
          column([j](const RepStats& s) { return s.arr_frac[j]; });
      std::tie(h1[j], se1[j]) = column([j](const RepStats& s) { return s.occ_h1[j]; });
      std::tie(h2[j], se2[j]) = column([j](const RepStats& s) { return s.occ_h2[j]; });
      result.tails.push_back(row);
    }
    std::tie(result.waits.mean, result.waits.se) =
        column([](const RepStats& s) { return s.wait_mean; });
    for (const auto& s : stats_per_rep) {
      result.waits.max = std::max(result.waits.max, s.wait_max);
      result.waits.jobs += s.wait_jobs;
      if (s.time_at_level.size() > result.time_at_level.size())
        result.time_at_level.resize(s.time_at_level.size(), 0.0);
      for (std::size_t k = 0; k < s.time_at_level.size(); ++k)
        result.time_at_level[k] += s.time_at_level[k];
    }
    const auto [busy, busy_se] = column([](const RepStats& s) { return s.busy_fraction; });
    const auto [l1, l1se] = column([](const RepStats& s) { return s.mean_L_h1; });
    const auto [l2, l2se] = column([](const RepStats& s) { return s.mean_L_h2; });
    result.diag.busy_fraction = busy;
    result.diag.horizon_used = horizon;
    result.diag.doublings = doublings;
    result.diag.halves_agree = halves_agree(h1, h2, se1, se2);
    result.diag.unstable = detect_instability(busy, l1, l2);

    if (!result.diag.halves_agree && doublings < opt.max_doublings) {
      ++doublings;
      horizon *= 2.0;  // slow heavy-tailed mixing: extend and re-run (same streams,
      continue;        // so the previous path is a prefix of the new one)
    }
    break;
  }
  return result;
}

MmnDistribution::MmnDistribution(int n, double lam) : n_(n), lam_(lam), rho_(lam / n) {
  if (n < 1) throw std::invalid_argument("mmn_exact: n must be >= 1");
  if (!(lam > 0.0) || !(lam < static_cast<double>(n)))
    throw std::invalid_argument("mmn_exact: need 0 < lam < n for stability");
  // log weights r_k = lam^k / k! (k <= n), normalized with the geometric tail
  std::vector<double> logr(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k)
    logr[static_cast<std::size_t>(k)] =
        logr[static_cast<std::size_t>(k - 1)] + std::log(lam) - std::log(static_cast<double>(k));
  const double m = *std::max_element(logr.begin(), logr.end());
  double z = 0.0;
  for (double v : logr) z += std::exp(v - m);
  z += std::exp(logr.back() - m) * rho_ / (1.0 - rho_);
  pmf_.resize(logr.size());
  for (std::size_t k = 0; k < logr.size(); ++k) pmf_[k] = std::exp(logr[k] - m) / z;
  tail_at_n_ = pmf_.back() / (1.0 - rho_);
}

double MmnDistribution::pmf_queue(std::uint64_t k) const {
  if (k <= static_cast<std::uint64_t>(n_)) return pmf_[k];
  return pmf_.back() * std::pow(rho_, static_cast<double>(k - static_cast<std::uint64_t>(n_)));
}

double MmnDistribution::ccdf_queue(std::uint64_t k) const {
  if (k > static_cast<std::uint64_t>(n_))
    return tail_at_n_ * std::pow(rho_, static_cast<double>(k - static_cast<std::uint64_t>(n_)));
  double head = 0.0;
  for (std::uint64_t j = 0; j < k; ++j) head += pmf_[j];
  return 1.0 - head;
}

double MmnDistribution::ccdf_waiting(std::uint64_t k) const {
  if (k == 0) return 1.0;
  return ccdf_queue(static_cast<std::uint64_t>(n_) + k);
}

MmnDistribution mmn_exact(int n, double lam) { return MmnDistribution(n, lam); }

GidnResult gidn_tail(const QueueConfig& cfg, const GidnOptions& opt) {
  if (cfg.service.family() != dist::Family::deterministic)
    throw std::invalid_argument("gidn_tail: service must be deterministic");
  if (!cfg.arrival.tail_index())
    throw std::invalid_argument("gidn_tail: arrival spec must be Pareto-tailed");
  const double lam = cfg.lambda();
  const int n = cfg.n;
  const double scale = cfg.scale();

  struct Rep {
    std::vector<double> l_norm;
    std::vector<double> w_norm;
    std::vector<double> tail_frac;  // per threshold
  };
  const auto levels = integer_levels(opt.thresholds, scale);

  auto reps_out = run_replications<Rep>(
      opt.reps,
      [&](std::size_t r) {
        RngStream rng(opt.seed, substream_id(r, 0));
        RngStream rng_count(opt.seed, substream_id(r, 1));  // independent of the waits
        Rep rep;
        std::vector<double> W(static_cast<std::size_t>(n), 0.0);
        // ring buffer of the last n inter-arrival gaps: T_j - T_{j-n} is their sum
        std::vector<double> gaps(static_cast<std::size_t>(n));
        double gap_sum = 0.0;
        for (int i = 0; i < n; ++i) {
          gaps[static_cast<std::size_t>(i)] = cfg.arrival.sample(rng) / lam;
          gap_sum += gaps[static_cast<std::size_t>(i)];
        }
        const std::uint64_t total_blocks =
            opt.warmup_blocks + opt.snapshots * opt.snapshot_stride;
        std::uint64_t taken = 0;
        for (std::uint64_t b = 0; b < total_blocks; ++b) {
          for (int c = 0; c < n; ++c) {
            // job j with j mod n == c; its server's previous job is j - n
            W[static_cast<std::size_t>(c)] =
                std::max(0.0, W[static_cast<std::size_t>(c)] + 1.0 - gap_sum);
            const double g = cfg.arrival.sample(rng) / lam;
            gap_sum += g - gaps[static_cast<std::size_t>(c)];
            gaps[static_cast<std::size_t>(c)] = g;
          }
          const bool snapshot = b >= opt.warmup_blocks &&
                                (b - opt.warmup_blocks) % opt.snapshot_stride == 0 &&
                                taken < opt.snapshots;
          if (snapshot) {
            ++taken;
            for (int c = 0; c < n; ++c) {
              const double w = W[static_cast<std::size_t>(c)];
              rep.w_norm.push_back(std::pow(static_cast<double>(n), 1.0 - 1.0 / cfg.alpha) * w);
              // distributional Little's law: count equilibrium arrivals on
              // [0, lam (1 + w)] with a stream independent of the recursion
              const double horizon = lam * (1.0 + w);
              double t = cfg.arrival.sample_equilibrium(rng_count);
              std::uint64_t q = 0;
              while (t <= horizon) {
                ++q;
                t += cfg.arrival.sample(rng_count);
              }
              const double L =
                  q > static_cast<std::uint64_t>(n) ? static_cast<double>(q - n) : 0.0;
              rep.l_norm.push_back(L / scale);
            }
          }
        }
        rep.tail_frac.assign(levels.size(), 0.0);
        for (double ln : rep.l_norm)
          for (std::size_t j = 0; j < levels.size(); ++j)
            if (ln * scale >= static_cast<double>(levels[j]) - 1e-9) rep.tail_frac[j] += 1.0;
        for (auto& f : rep.tail_frac) f /= static_cast<double>(rep.l_norm.size());
        return rep;
      },
      opt.parallel);

  GidnResult out;
  out.replications = opt.reps;
  std::vector<double> col(opt.reps);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    for (std::size_t r = 0; r < opt.reps; ++r) col[r] = reps_out[r].tail_frac[j];
    TailRow row;
    row.x = opt.thresholds[j];
    row.level = levels[j];
    row.prob = stats::mean(col);
    row.se = stats::stderr_of_mean(col);
    row.prob_arrival = row.prob;  // the counting identity yields the stationary law
    row.se_arrival = row.se;
    out.tails.push_back(row);
  }
  for (auto& rep : reps_out) {
    out.l_normalized.insert(out.l_normalized.end(), rep.l_norm.begin(), rep.l_norm.end());
    out.w_normalized.insert(out.w_normalized.end(), rep.w_norm.begin(), rep.w_norm.end());
  }
  return out;
}

}  // namespace hwq::queuesim
