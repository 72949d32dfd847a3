#include "hwq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwq::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double v : xs) s += v;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("sample_variance: need >= 2 points");
  const double m = mean(xs);
  double s = 0.0;
  for (double v : xs) s += (v - m) * (v - m);
  return s / static_cast<double>(n - 1);
}

double stderr_of_mean(std::span<const double> xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

double stderr_of_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("stderr_of_variance: need >= 2 points");
  const double m = mean(xs);
  double m2 = 0.0, m4 = 0.0;
  for (double v : xs) {
    const double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  const double var_of_var = (m4 - m2 * m2) / static_cast<double>(n);
  return std::sqrt(std::max(var_of_var, 0.0));
}

double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
  std::sort(xs.begin(), xs.end());
  const double h = p * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = h - static_cast<double>(lo);
  return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

double weighted_level_quantile(std::span<const double> mass_at_level, double p) {
  double total = 0.0;
  for (double w : mass_at_level) total += w;
  if (total <= 0.0) throw std::invalid_argument("weighted_level_quantile: no mass");
  double acc = 0.0;
  for (std::size_t k = 0; k < mass_at_level.size(); ++k) {
    const double prev = acc;
    acc += mass_at_level[k] / total;
    if (acc >= p) {
      const double within = (p - prev) / (acc - prev);
      // level k occupies [k, k+1) when interpolated continuously
      return static_cast<double>(k) + within;
    }
  }
  return static_cast<double>(mass_at_level.size());
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need matching samples, >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares: degenerate design");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

double poisson_tail(double lambda, std::uint64_t k) {
  if (lambda < 0.0) throw std::invalid_argument("poisson_tail: lambda < 0");
  if (k == 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  // P(X >= k) = 1 - sum_{j<k} exp(j log l - l - lgamma(j+1)); sum the smaller side.
  double head = 0.0;
  for (std::uint64_t j = 0; j < k; ++j) {
    head += std::exp(static_cast<double>(j) * std::log(lambda) - lambda -
                     std::lgamma(static_cast<double>(j) + 1.0));
  }
  if (head < 0.5) return 1.0 - head;
  double tail = 0.0;
  double term = std::exp(static_cast<double>(k) * std::log(lambda) - lambda -
                         std::lgamma(static_cast<double>(k) + 1.0));
  std::uint64_t j = k;
  while (term > 1e-300 * (1.0 + tail)) {
    tail += term;
    ++j;
    term *= lambda / static_cast<double>(j);
    if (j > k + 100000000ULL) break;
  }
  return tail;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return adaptive_step(f, a, fa, b, fb, m, fm, simpson(f, a, fa, b, fb, m, fm), tol,
                       max_depth);
}

}  // namespace hwq::stats
