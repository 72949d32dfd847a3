#pragma once

// Evaluators for the explicit finite-n tail bounds and their proof-pipeline
// components. The leading constants are astronomical (1e92, 1e100), so
// everything is evaluated in log space; reports carry log10 of the raw value
// together with the probability cap min(value, 1).

#include <optional>
#include <vector>

namespace hwq::bounds {

// Mean-wait bound y^2 sigma_A^2 / (2(y-1)) for the GI/GI/1 comparison queue.
double kingman(double y, double sigma_sq_A);

struct PooledSupBound {
  double lead = 0.0;        // the (100 (r1+r2)^3 / ...)^{r1+r2+2} prefactor
  double term1 = 0.0;       // C1 n^{r1/2} nu^{-s1} lam^{-(r1-s1)}
  double term2 = 0.0;       // C2 n^{r2/2} (lam nu)^{-r2/2}
  double total = 0.0;       // lead * (term1 + term2); +inf if it overflows
  double log10_total = 0.0;
  double capped = 0.0;      // min(total, 1)
};

// Probability bound for the drifted pooled-renewal supremum, given moment
// growth constants (C1, r1, s1) for t >= 1 and (C2, r2) for t in [0,1].
PooledSupBound pooled_sup_bound(double C1, double C2, double r1, double s1, double r2,
                                double n, double nu, double lam);

// exp(theta) (1e5 p^4 / (1 - E[exp(-theta S)]))^{p+2} max(kt, (kt)^{p/2}),
// the centered-moment bound for pooled counts on short horizons.
double small_t_moment_bound(double p, double theta, double laplace_theta, double k, double t);

struct Thm1Row {
  double x = 0.0;
  double headline_log10 = 0.0;  // the full explicit bound
  double headline = 0.0;        // +inf when it overflows a double
  double headline_capped = 1.0;
  double boundapart = 0.0;      // arrival-side component, 1e2 sA^2 B^-1 n^{1-2/a} x^-1
  double spart_log10 = 0.0;     // service-side component
  double spart = 0.0;
  double spart_capped = 1.0;
};

// Explicit bound on P(L / sqrt(n) >= x), x >= 16, together with its two
// proof components (the arrival component evaluated at alpha = 2, where the
// n-dependence drops out).
Thm1Row thm1_bound(double eps, double frac_moment, double laplace_one, double sigma_sq_A,
                   double B, double x);

// exp(-hwr_rate(B, C_A, alpha) x): proven tail bound in the heavy-arrival
// regime.
double hwr_tail(double B, double C_A, double alpha, double x);

// exp(c_bs(B, C_S, alpha_S) x^{alpha_S - 1}): the limiting decay shape. This
// is an asymptotic approximation, not a proven finite-x bound; reports carry
// the flag.
double cbs_tail(double B, double C_S, double alpha_S, double x);

struct BoundReportInputs {
  double eps = 1.0;
  double frac_moment = 2.0;   // E[S^{1+eps}]
  double laplace_one = 0.5;   // E[exp(-S)]
  double sigma_sq_A = 1.0;
  double B = 1.0;
  int n = 100;
  double alpha = 2.0;
  std::optional<double> C_A;       // enables the hwr column (alpha in (1,2))
  std::optional<double> C_S;       // enables the cbs column
  std::optional<double> alpha_S;
};

struct BoundReportRow {
  double x = 0.0;
  Thm1Row thm1;
  double kingman_mean = 0.0;          // at the pipeline's y = (n - B/2 n^{1/a})/lambda
  std::optional<double> hwr;
  std::optional<double> cbs;
};

struct BoundReport {
  BoundReportInputs inputs;
  bool cbs_is_asymptotic_approximation = true;
  std::vector<BoundReportRow> rows;
};

BoundReport make_bound_report(const BoundReportInputs& in, const std::vector<double>& xs);

}  // namespace hwq::bounds
