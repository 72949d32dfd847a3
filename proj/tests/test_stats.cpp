#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hwq/rng.hpp"
#include "hwq/stats.hpp"

namespace st = hwq::stats;

TEST_CASE("moments on a tiny sample") {
  std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  CHECK(st::mean(xs) == doctest::Approx(2.5));
  CHECK(st::sample_variance(xs) == doctest::Approx(5.0 / 3.0));
  CHECK(st::stderr_of_mean(xs) == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("quantile interpolates") {
  std::vector<double> xs = {0.0, 1.0, 2.0, 3.0, 4.0};
  CHECK(st::quantile(xs, 0.0) == doctest::Approx(0.0));
  CHECK(st::quantile(xs, 0.5) == doctest::Approx(2.0));
  CHECK(st::quantile(xs, 0.9) == doctest::Approx(3.6));
  CHECK(st::quantile(xs, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("weighted level quantile") {
  // 80% of time at level 0, 15% at level 1, 5% at level 2
  std::vector<double> mass = {0.8, 0.15, 0.05};
  CHECK(st::weighted_level_quantile(mass, 0.4) == doctest::Approx(0.5));
  CHECK(st::weighted_level_quantile(mass, 0.9) == doctest::Approx(1.0 + 0.1 / 0.15));
}

TEST_CASE("ks distance: identical and disjoint samples") {
  std::vector<double> a = {1, 2, 3, 4, 5};
  CHECK(st::ks_distance(a, a) == doctest::Approx(0.0));
  std::vector<double> b = {10, 11, 12};
  CHECK(st::ks_distance(a, b) == doctest::Approx(1.0));
}

TEST_CASE("ks distance detects a shift at the right scale") {
  hwq::RngStream rng(3, 0);
  std::vector<double> a(20000), b(20000);
  for (auto& v : a) v = rng.uniform();
  for (auto& v : b) v = rng.uniform() + 0.1;
  const double d = st::ks_distance(a, b);
  CHECK(d > 0.08);
  CHECK(d < 0.12);
}

TEST_CASE("least squares recovers a line") {
  std::vector<double> x = {0, 1, 2, 3}, y = {1.0, 3.0, 5.0, 7.0};
  const auto fit = st::least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
}

TEST_CASE("poisson tail exact values") {
  // P(Pois(90) >= 100) = 0.158220989..., the lower-bound factor at n=100, B=1
  CHECK(st::poisson_tail(90.0, 100) == doctest::Approx(0.15822098918643).epsilon(1e-10));
  CHECK(st::poisson_tail(1.0, 1) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(st::poisson_tail(5.0, 0) == doctest::Approx(1.0));
  // complements sum to one
  CHECK(st::poisson_tail(20.0, 15) + (1.0 - st::poisson_tail(20.0, 15)) ==
        doctest::Approx(1.0));
}

TEST_CASE("normal tail") {
  CHECK(st::normal_sf(0.0) == doctest::Approx(0.5));
  CHECK(st::normal_sf(1.959963985) == doctest::Approx(0.025).epsilon(1e-6));
  CHECK(st::normal_cdf(1.0) + st::normal_sf(1.0) == doctest::Approx(1.0));
}

TEST_CASE("adaptive simpson") {
  const double v = st::adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 5.0,
                                        1e-12);
  CHECK(v == doctest::Approx(std::sqrt(std::acos(-1.0)) / 2.0).epsilon(1e-10));
  const double p = st::adaptive_simpson([](double x) { return std::pow(x, 3.5); }, 0.0, 2.0,
                                        1e-12);
  CHECK(p == doctest::Approx(std::pow(2.0, 4.5) / 4.5).epsilon(1e-10));
}
