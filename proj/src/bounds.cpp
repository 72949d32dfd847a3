#include "hwq/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hwq/queuesim.hpp"
#include "hwq/special.hpp"

namespace hwq::bounds {

namespace {

double from_log10(double l) {
  if (l > 308.0) return std::numeric_limits<double>::infinity();
  return std::pow(10.0, l);
}

}  // namespace

double kingman(double y, double sigma_sq_A) {
  if (!(y > 1.0)) throw std::invalid_argument("kingman: y must exceed 1");
  if (sigma_sq_A < 0.0) throw std::invalid_argument("kingman: negative variance");
  return y * y * sigma_sq_A / (2.0 * (y - 1.0));
}

PooledSupBound pooled_sup_bound(double C1, double C2, double r1, double s1, double r2,
                                double n, double nu, double lam) {
  if (!(C1 > 0.0) || C2 < 0.0)
    throw std::invalid_argument("pooled_sup_bound: need C1 > 0 and C2 >= 0");
  if (!(r1 > s1) || !(s1 > 1.0))
    throw std::invalid_argument("pooled_sup_bound: need r1 > s1 > 1");
  if (!(r2 > 2.0)) throw std::invalid_argument("pooled_sup_bound: need r2 > 2");
  if (!(lam >= 8.0)) throw std::invalid_argument("pooled_sup_bound: need lam >= 8");
  if (!(nu > 0.0)) throw std::invalid_argument("pooled_sup_bound: need nu > 0");
  if (!(n >= 1.0)) throw std::invalid_argument("pooled_sup_bound: need n >= 1");

  PooledSupBound b;
  const double lead_log10 =
      (r1 + r2 + 2.0) *
      std::log10(100.0 * std::pow(r1 + r2, 3.0) / ((s1 - 1.0) * (r1 - s1) * (r2 - 2.0)));
  b.lead = from_log10(lead_log10);
  b.term1 = C1 * std::pow(n, r1 / 2.0) * std::pow(nu, -s1) * std::pow(lam, -(r1 - s1));
  b.term2 = C2 * std::pow(n, r2 / 2.0) * std::pow(lam * nu, -r2 / 2.0);
  b.log10_total = lead_log10 + std::log10(b.term1 + b.term2);
  b.total = from_log10(b.log10_total);
  b.capped = std::min(b.total, 1.0);
  return b;
}

double small_t_moment_bound(double p, double theta, double laplace_theta, double k, double t) {
  if (!(p >= 2.0)) throw std::invalid_argument("small_t_moment_bound: need p >= 2");
  if (!(theta > 0.0)) throw std::invalid_argument("small_t_moment_bound: need theta > 0");
  if (!(laplace_theta > 0.0) || !(laplace_theta < 1.0))
    throw std::invalid_argument(
        "small_t_moment_bound: E[exp(-theta S)] must lie in (0,1); a value >= 1 "
        "means S is degenerate at 0");
  if (!(k >= 1.0)) throw std::invalid_argument("small_t_moment_bound: need k >= 1");
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("small_t_moment_bound: t outside [0,1]");
  if (t == 0.0) return 0.0;
  const double log10v = theta / std::log(10.0) +
                        (p + 2.0) * std::log10(1e5 * std::pow(p, 4.0) / (1.0 - laplace_theta)) +
                        std::log10(std::max(k * t, std::pow(k * t, p / 2.0)));
  return from_log10(log10v);
}

Thm1Row thm1_bound(double eps, double frac_moment, double laplace_one, double sigma_sq_A,
                   double B, double x) {
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("thm1_bound: eps outside (0,1]");
  if (frac_moment < 1.0)
    throw std::invalid_argument("thm1_bound: E[S^{1+eps}] < 1 contradicts E[S] = 1");
  if (!(laplace_one > 0.0) || !(laplace_one < 1.0))
    throw std::invalid_argument("thm1_bound: E[exp(-S)] must lie in (0,1)");
  if (sigma_sq_A < 0.0) throw std::invalid_argument("thm1_bound: negative variance");
  if (!(B > 0.0)) throw std::invalid_argument("thm1_bound: B must be positive");
  if (!(x >= 16.0))
    throw std::invalid_argument("thm1_bound: the bound only holds for x >= 16");

  Thm1Row row;
  row.x = x;
  const double decay = -(eps / (1.0 + eps)) * std::log10(x);
  const double b_factor = std::log10(1.0 / B + 1.0 / (B * B));
  row.headline_log10 = 100.0 - 7.0 * std::log10(eps * (1.0 - laplace_one)) +
                       std::log10(10.0 * frac_moment) / eps + std::log10(1.0 + sigma_sq_A) +
                       b_factor + decay;
  row.headline = from_log10(row.headline_log10);
  row.headline_capped = std::min(row.headline, 1.0);
  // arrival component at alpha = 2 (n^{1 - 2/alpha} = 1)
  row.boundapart = 1e2 * sigma_sq_A / (B * x);
  row.spart_log10 = 92.0 - 7.0 * std::log10(eps) + std::log10(8.0 * frac_moment) / eps -
                    5.0 * std::log10(1.0 - laplace_one) + b_factor + decay;
  row.spart = from_log10(row.spart_log10);
  row.spart_capped = std::min(row.spart, 1.0);
  return row;
}

double hwr_tail(double B, double C_A, double alpha, double x) {
  if (x < 0.0) throw std::invalid_argument("hwr_tail: x must be >= 0");
  return std::exp(-special::hwr_rate(B, C_A, alpha) * x);
}

double cbs_tail(double B, double C_S, double alpha_S, double x) {
  if (x < 0.0) throw std::invalid_argument("cbs_tail: x must be >= 0");
  return std::exp(special::c_bs(B, C_S, alpha_S) * std::pow(x, alpha_S - 1.0));
}

BoundReport make_bound_report(const BoundReportInputs& in, const std::vector<double>& xs) {
  BoundReport report;
  report.inputs = in;
  const double lam = queuesim::lambda_n(in.n, in.B, in.alpha);
  const double na = std::pow(static_cast<double>(in.n), 1.0 / in.alpha);
  const double y = (static_cast<double>(in.n) - 0.5 * in.B * na) / lam;
  for (double x : xs) {
    BoundReportRow row;
    row.x = x;
    row.thm1 = thm1_bound(in.eps, in.frac_moment, in.laplace_one, in.sigma_sq_A, in.B, x);
    row.kingman_mean = kingman(y, in.sigma_sq_A);
    if (in.C_A && in.alpha > 1.0 && in.alpha < 2.0)
      row.hwr = hwr_tail(in.B, *in.C_A, in.alpha, x);
    if (in.C_S && in.alpha_S) row.cbs = cbs_tail(in.B, *in.C_S, *in.alpha_S, x);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace hwq::bounds
