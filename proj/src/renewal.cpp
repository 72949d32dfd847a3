#include "hwq/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "hwq/stats.hpp"

namespace hwq::renewal {

RenewalStream::RenewalStream(dist::DistributionSpec s, Mode m, RngStream& rng)
    : spec(std::move(s)), mode(m) {
  next_event = (mode == Mode::equilibrium) ? spec.sample_equilibrium(rng) : spec.sample(rng);
}

void RenewalStream::advance(RngStream& rng) {
  ++count;
  next_event += spec.sample(rng);
}

PooledPath pooled_centered_path(int n, const dist::DistributionSpec& spec, double horizon,
                                std::span<const double> grid, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("pooled_centered_path: n must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("pooled_centered_path: horizon must be positive and finite");
  if (static_cast<double>(n) * horizon > 1e15)
    throw std::invalid_argument("pooled_centered_path: n * horizon too large");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("pooled_centered_path: grid must be increasing");

  PooledPath path;
  path.n = n;
  path.times.assign(grid.begin(), grid.end());
  path.centered.assign(grid.size(), 0.0);
  path.per_stream_counts.assign(static_cast<std::size_t>(n), 0);

  // min-heap over (next event time, stream index); ties broken by stream index
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (int i = 0; i < n; ++i) heap.emplace(spec.sample_equilibrium(rng), i);

  std::uint64_t events = 0;
  std::size_t gi = 0;
  auto centered_at = [&](double t) { return static_cast<double>(events) - static_cast<double>(n) * t; };

  double tmin = 0.0, tmax = 0.0;  // centered value is 0 at t = 0
  while (!heap.empty()) {
    auto [t, idx] = heap.top();
    if (t > horizon) break;
    heap.pop();
    // centered value drifts down continuously, jumps +1 at the event
    while (gi < grid.size() && grid[gi] < t) {
      path.centered[gi] = centered_at(grid[gi]);
      ++gi;
    }
    tmin = std::min(tmin, centered_at(t));
    ++events;
    ++path.per_stream_counts[static_cast<std::size_t>(idx)];
    tmax = std::max(tmax, centered_at(t));
    heap.emplace(t + spec.sample(rng), idx);
  }
  while (gi < grid.size()) {
    path.centered[gi] = centered_at(std::min(grid[gi], horizon));
    ++gi;
  }
  tmin = std::min(tmin, centered_at(horizon));
  path.min_seen = tmin;
  path.max_seen = tmax;
  path.total_count = events;
  return path;
}

namespace {

// Counting-process values at grid times for one replication.
std::vector<std::uint64_t> counts_at(const dist::DistributionSpec& spec, Mode mode,
                                     std::span<const double> t_grid, RngStream& rng) {
  std::vector<std::uint64_t> out(t_grid.size(), 0);
  double t = (mode == Mode::equilibrium) ? spec.sample_equilibrium(rng) : spec.sample(rng);
  std::uint64_t cnt = 0;
  std::size_t gi = 0;
  const double tmax = t_grid.back();
  while (true) {
    while (gi < t_grid.size() && t_grid[gi] < t) out[gi++] = cnt;
    if (t > tmax) break;
    ++cnt;
    t += spec.sample(rng);
  }
  return out;
}

std::vector<EstimateRow> reduce_rows(std::span<const double> t_grid,
                                     const std::vector<std::vector<double>>& per_rep,
                                     bool variance) {
  std::vector<EstimateRow> rows(t_grid.size());
  std::vector<double> col(per_rep.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    for (std::size_t r = 0; r < per_rep.size(); ++r) col[r] = per_rep[r][j];
    rows[j].t = t_grid[j];
    rows[j].reps = per_rep.size();
    if (variance) {
      rows[j].value = stats::sample_variance(col);
      rows[j].se = stats::stderr_of_variance(col);
    } else {
      rows[j].value = stats::mean(col);
      rows[j].se = stats::stderr_of_mean(col);
    }
  }
  return rows;
}

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("estimate: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw std::invalid_argument("estimate: negative t");
    if (i > 0 && t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("estimate: t grid must be increasing");
  }
}

}  // namespace

std::vector<EstimateRow> estimate_renewal_fn(const dist::DistributionSpec& spec,
                                             std::span<const double> t_grid,
                                             const EstimateOptions& opt) {
  check_grid(t_grid);
  auto per_rep = run_replications<std::vector<double>>(
      opt.reps,
      [&](std::size_t r) {
        RngStream rng(opt.seed, substream_id(r, 0));
        auto cnt = counts_at(spec, Mode::ordinary, t_grid, rng);
        std::vector<double> row(cnt.size());
        for (std::size_t j = 0; j < cnt.size(); ++j) row[j] = static_cast<double>(cnt[j]);
        return row;
      },
      opt.parallel);
  return reduce_rows(t_grid, per_rep, /*variance=*/false);
}

std::uint64_t default_variance_reps(double t) {
  const double r = 200.0 * std::pow(std::max(t, 1.0), 0.25);
  return static_cast<std::uint64_t>(std::min(r, 1e5));
}

std::vector<EstimateRow> estimate_variance(const dist::DistributionSpec& spec,
                                           std::span<const double> t_grid,
                                           const EstimateOptions& opt) {
  check_grid(t_grid);
  const std::uint64_t reps = opt.reps > 0 ? opt.reps : default_variance_reps(t_grid.back());
  auto per_rep = run_replications<std::vector<double>>(
      reps,
      [&](std::size_t r) {
        RngStream rng(opt.seed, substream_id(r, 1));
        auto cnt = counts_at(spec, Mode::equilibrium, t_grid, rng);
        std::vector<double> row(cnt.size());
        for (std::size_t j = 0; j < cnt.size(); ++j) row[j] = static_cast<double>(cnt[j]);
        return row;
      },
      opt.parallel);
  return reduce_rows(t_grid, per_rep, /*variance=*/true);
}

double farrell_bound(double eps, double frac_moment, double t) {
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("farrell_bound: eps outside (0,1]");
  if (frac_moment < 1.0)
    throw std::invalid_argument("farrell_bound: E[S^{1+eps}] below 1 contradicts E[S] = 1");
  if (t < 0.0) throw std::invalid_argument("farrell_bound: t < 0");
  return std::pow(2.0 * frac_moment, 1.0 / eps) * (1.0 + std::pow(t, 1.0 / (1.0 + eps)));
}

double variance_bound(double eps, double frac_moment, double t) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("variance_bound: eps outside (0,1]");
  if (frac_moment < 1.0)
    throw std::invalid_argument("variance_bound: E[S^{1+eps}] below 1 contradicts E[S] = 1");
  if (t < 0.0) throw std::invalid_argument("variance_bound: t < 0");
  if (t == 0.0) return 0.0;
  return std::pow(4.0 * frac_moment, 1.0 / eps) * (t + std::pow(t, 1.0 + 1.0 / (1.0 + eps)));
}

double variance_integral_route(std::span<const EstimateRow> rows, double t) {
  if (rows.empty()) throw std::invalid_argument("variance_integral_route: no rows");
  // integrand f(s) = E[N_o(s)] + 1 - s - 1/2, with f(0) = 1/2 exactly
  double integral = 0.0;
  double s_prev = 0.0, f_prev = 0.5;
  for (const auto& row : rows) {
    if (row.t > t + 1e-12) break;
    const double f = row.value + 1.0 - row.t - 0.5;
    integral += 0.5 * (f + f_prev) * (row.t - s_prev);
    s_prev = row.t;
    f_prev = f;
  }
  if (s_prev < t - 1e-9)
    throw std::invalid_argument("variance_integral_route: rows do not reach t");
  return 2.0 * integral;
}

}  // namespace hwq::renewal
