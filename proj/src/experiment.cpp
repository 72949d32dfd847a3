#include "hwq/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hwq/special.hpp"
#include "hwq/stats.hpp"

namespace hwq::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string ResultRecord::content_hash() const {
  // nlohmann objects serialize with sorted keys, so the dump is canonical
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(config.dump() + "|" + results.dump())));
  return buf;
}

nlohmann::json ResultRecord::to_json() const {
  nlohmann::json j;
  j["config"] = config;
  j["results"] = results;
  j["status"] = static_cast<int>(status);
  j["notices"] = notices;
  j["hash"] = content_hash();
  return j;
}

namespace {

void write_table(std::ostream& os, const std::vector<CsvColumn>& columns,
                 const std::vector<std::vector<double>>& rows, char sep, bool schema) {
  if (schema)
    for (const auto& col : columns) os << "# column " << col.name << ": " << col.description << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << (i ? std::string(1, sep) : "") << columns[i].name;
  os << "\n";
  os.precision(12);
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::invalid_argument("write_csv: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? std::string(1, sep) : "") << row[i];
    os << "\n";
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path);
  write_table(os, columns, rows, ',', true);
}

void write_dat(const std::string& path, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path);
  write_table(os, columns, rows, ' ', false);
}

ResultRecord run_scaling_study(const ScalingConfig& cfg) {
  if (cfg.n_grid.size() < 3)
    throw std::invalid_argument("run_scaling_study: need an n-grid with >= 3 points");
  ResultRecord rec;
  rec.config = {{"experiment", "scaling"},
                {"n_grid", cfg.n_grid},
                {"B", cfg.B},
                {"alpha", cfg.alpha},
                {"arrival", cfg.arrival.to_string()},
                {"service", cfg.service.to_string()},
                {"quantile_p", cfg.quantile_p},
                {"horizon_multiplier", cfg.horizon_multiplier},
                {"reps", cfg.reps},
                {"seed", cfg.seed}};
  nlohmann::json per_n = nlohmann::json::array();
  std::vector<double> quantiles;
  for (int n : cfg.n_grid) {
    queuesim::QueueConfig qc(n, cfg.B, cfg.alpha, cfg.arrival, cfg.service);
    queuesim::SimOptions opt;
    opt.horizon = cfg.horizon_multiplier * std::sqrt(static_cast<double>(n));
    opt.reps = cfg.reps;
    opt.seed = cfg.seed;
    opt.max_doublings = cfg.max_doublings;
    opt.parallel = cfg.parallel;
    const auto result = queuesim::simulate_queue(qc, opt);
    const double q =
        stats::weighted_level_quantile(result.time_at_level, cfg.quantile_p) / qc.scale();
    quantiles.push_back(q);
    per_n.push_back({{"n", n},
                     {"quantile", q},
                     {"horizon_used", result.diag.horizon_used},
                     {"doublings", result.diag.doublings},
                     {"halves_agree", result.diag.halves_agree},
                     {"unstable", result.diag.unstable}});
    if (result.diag.unstable) {
      rec.status = Status::fail;
      rec.notices.push_back("instability diagnostic at n=" + std::to_string(n));
    } else if (!result.diag.halves_agree) {
      if (rec.status == Status::ok) rec.status = Status::soft;
      rec.notices.push_back("half-window estimates still moving at n=" + std::to_string(n));
    }
  }
  const double lo = *std::min_element(quantiles.begin(), quantiles.end());
  const double hi = *std::max_element(quantiles.begin(), quantiles.end());
  rec.results["per_n"] = per_n;
  rec.results["spread_ratio"] = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rec;
}

LdSlopeResult run_ld_slope(const std::vector<double>& samples, double gamma,
                           std::uint64_t bootstrap, std::uint64_t seed) {
  if (samples.size() < 10000)
    throw std::invalid_argument("run_ld_slope: need >= 1e4 samples for a stable tail fit");
  if (!(gamma > 0.0)) throw std::invalid_argument("run_ld_slope: gamma must be positive");

  auto fit_on = [&](const std::vector<double>& xs) -> std::optional<double> {
    std::vector<double> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> tx, ty;
    const int points = 25;
    for (int i = 0; i < points; ++i) {
      const double p = 0.50 + (0.995 - 0.50) * static_cast<double>(i) / (points - 1);
      const double h = p * static_cast<double>(sorted.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(h);
      const double q = lo + 1 < sorted.size()
                           ? sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo])
                           : sorted.back();
      if (q <= 0.0) continue;  // tail fit needs positive thresholds
      tx.push_back(std::pow(q, gamma));
      ty.push_back(std::log(1.0 - p));
    }
    if (tx.size() < 5 || tx.back() - tx.front() < 1e-9) return std::nullopt;
    return stats::least_squares(tx, ty).slope;
  };

  LdSlopeResult out;
  out.gamma = gamma;
  const auto main_fit = fit_on(samples);
  if (!main_fit) {
    out.insufficient_tail = true;
    return out;
  }
  out.slope = *main_fit;
  out.points = 25;

  RngStream rng(seed, substream_id(0, 7));
  std::vector<double> boot_slopes;
  std::vector<double> resampled(samples.size());
  for (std::uint64_t b = 0; b < bootstrap; ++b) {
    for (auto& v : resampled)
      v = samples[static_cast<std::size_t>(rng.uniform() * samples.size())];
    if (const auto s = fit_on(resampled)) boot_slopes.push_back(*s);
  }
  if (boot_slopes.size() >= 8)
    out.band = 2.0 * std::sqrt(stats::sample_variance(boot_slopes));
  return out;
}

ResultRecord run_dominance(const DominanceConfig& cfg) {
  ResultRecord rec;
  rec.config = {{"experiment", "dominance"},
                {"n", cfg.queue.n},
                {"B", cfg.queue.B},
                {"alpha", cfg.queue.alpha},
                {"arrival", cfg.queue.arrival.to_string()},
                {"service", cfg.queue.service.to_string()},
                {"x_grid", cfg.x_grid},
                {"seed", cfg.seed},
                {"queue_reps", cfg.sim.reps},
                {"sup_reps", cfg.sup.reps}};

  queuesim::SimOptions sim = cfg.sim;
  sim.thresholds = cfg.x_grid;
  sim.seed = cfg.seed;
  const auto queue = queuesim::simulate_queue(cfg.queue, sim);

  compare::SupOptions sup = cfg.sup;
  sup.seed = cfg.seed + 1;
  const auto upper = compare::sup_upper_process(cfg.queue, sup);

  const bool markovian = cfg.queue.arrival.family() == dist::Family::exponential;
  if (!markovian)
    rec.notices.push_back(
        "lower bound disabled: the curve requires exponential inter-arrivals");

  nlohmann::json rows = nlohmann::json::array();
  bool hard_fail = false;
  for (std::size_t j = 0; j < cfg.x_grid.size(); ++j) {
    const double x = cfg.x_grid[j];
    // compare at the integer cutoff the queue estimator actually used
    const double x_eff = queue.tails[j].level / cfg.queue.scale();
    const auto [up, up_se] = upper.tail(x_eff);
    nlohmann::json row = {{"x", x},
                          {"queue", queue.tails[j].prob},
                          {"queue_se", queue.tails[j].se},
                          {"upper", up},
                          {"upper_se", up_se}};
    const double se_qu = std::hypot(queue.tails[j].se, up_se);
    bool ok_upper = queue.tails[j].prob <= up + 3.0 * se_qu;
    bool ok_lower = true;
    if (markovian) {
      compare::LowerBoundOptions lopt = cfg.lower;
      lopt.seed = cfg.seed + 2 + j;
      const auto lower = compare::lower_bound_curve(cfg.queue, x_eff, lopt);
      row["lower"] = lower.bound;
      row["lower_se"] = lower.bound_se;
      row["poisson_factor"] = lower.poisson_factor;
      row["t_star"] = lower.t_star;
      const double se_lq = std::hypot(queue.tails[j].se, lower.bound_se);
      ok_lower = lower.bound <= queue.tails[j].prob + 3.0 * se_lq;
    }
    row["pass"] = ok_upper && ok_lower;
    if (!(ok_upper && ok_lower)) hard_fail = true;
    rows.push_back(row);
  }
  rec.results["rows"] = rows;
  rec.results["upper_censored"] = upper.censored;
  rec.results["queue_horizon"] = queue.diag.horizon_used;
  if (hard_fail) rec.status = Status::fail;
  return rec;
}

ResultRecord run_reed_compare(const ReedCompareConfig& cfg) {
  ResultRecord rec;
  rec.config = {{"experiment", "reed-compare"},
                {"n", cfg.queue.n},
                {"B", cfg.queue.B},
                {"alpha", cfg.queue.alpha},
                {"arrival", cfg.queue.arrival.to_string()},
                {"gidn_reps", cfg.gidn.reps},
                {"walk_reps", cfg.walk.reps},
                {"seed", cfg.gidn.seed}};
  const auto gidn = queuesim::gidn_tail(cfg.queue, cfg.gidn);
  const double C_A = *cfg.queue.arrival.tail_constant();
  const auto walk = compare::stable_walk_sup(cfg.queue.alpha, C_A, cfg.queue.B, cfg.walk);
  const double ks = stats::ks_distance(gidn.l_normalized, walk.values);
  rec.results["ks_distance"] = ks;
  rec.results["gidn_samples"] = gidn.l_normalized.size();
  rec.results["walk_samples"] = walk.values.size();
  rec.results["walk_mean"] = walk.mean();
  rec.results["walk_censored"] = walk.censored;
  rec.results["levy_mean"] =
      1.0 / special::hwr_rate(cfg.queue.B, C_A, cfg.queue.alpha);
  if (ks > cfg.ks_threshold) {
    rec.status = Status::soft;
    rec.notices.push_back("KS distance above the asymptotic-agreement threshold");
  }
  return rec;
}

ResultRecord run_verify_renewal(const VerifyRenewalConfig& cfg) {
  ResultRecord rec;
  rec.config = {{"experiment", "verify-renewal"},
                {"spec", cfg.spec.to_string()},
                {"t_grid", cfg.t_grid},
                {"reps", cfg.reps},
                {"variance_reps", cfg.variance_reps},
                {"seed", cfg.seed}};

  double eps = 1.0;
  if (const auto aS = cfg.spec.tail_index())
    eps = std::min(1.0, (*aS - 1.0) / 2.0);
  const double frac = cfg.spec.frac_moment(eps);

  renewal::EstimateOptions mopt{cfg.reps, cfg.seed, cfg.parallel};
  // a finer grid below the largest t feeds the integral route
  std::vector<double> fine;
  const double tmax = cfg.t_grid.back();
  for (int i = 0; i <= 48; ++i) {
    const double s = tmax * std::pow(2.0, (i - 48) / 4.0);
    if (fine.empty() || s > fine.back() * (1.0 + 1e-12)) fine.push_back(s);
  }
  for (double t : cfg.t_grid)
    if (std::find(fine.begin(), fine.end(), t) == fine.end()) fine.push_back(t);
  std::sort(fine.begin(), fine.end());
  const auto mrows = renewal::estimate_renewal_fn(cfg.spec, fine, mopt);

  renewal::EstimateOptions vopt{cfg.variance_reps, cfg.seed + 1, cfg.parallel};
  const auto vrows = renewal::estimate_variance(cfg.spec, cfg.t_grid, vopt);

  bool hard_fail = false;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j < cfg.t_grid.size(); ++j) {
    const double t = cfg.t_grid[j];
    const auto mrow = *std::find_if(mrows.begin(), mrows.end(),
                                    [&](const auto& r) { return r.t == t; });
    const double excess = mrow.value + 1.0 - t;
    const double fb = renewal::farrell_bound(eps, frac, t);
    const double vb = renewal::variance_bound(eps, frac, t);
    const double integral = renewal::variance_integral_route(mrows, t);
    const bool ok_m = excess - 3.0 * mrow.se <= fb && mrow.value + 3.0 * mrow.se >= t - 1.0;
    const bool ok_v = vrows[j].value - 3.0 * vrows[j].se <= vb;
    if (!(ok_m && ok_v)) hard_fail = true;
    rows.push_back({{"t", t},
                    {"renewal_fn", mrow.value},
                    {"renewal_fn_se", mrow.se},
                    {"excess", excess},
                    {"farrell_bound", fb},
                    {"variance", vrows[j].value},
                    {"variance_se", vrows[j].se},
                    {"variance_bound", vb},
                    {"variance_integral_route", integral},
                    {"variance_reps", vrows[j].reps},
                    {"eps", eps},
                    {"pass", ok_m && ok_v}});
  }
  rec.results["rows"] = rows;
  if (hard_fail) rec.status = Status::fail;
  return rec;
}

}  // namespace hwq::cli
