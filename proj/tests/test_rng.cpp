#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hwq/rng.hpp"

using hwq::RngStream;

TEST_CASE("streams are deterministic given seed and stream id") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams differ") {
  RngStream a(42, 1), b(42, 2), c(43, 1);
  int equal_ab = 0, equal_ac = 0;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    if (va == b.next_u64()) ++equal_ab;
    if (va == c.next_u64()) ++equal_ac;
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
}

TEST_CASE("uniform lies strictly inside (0,1) and is roughly uniform") {
  RngStream rng(1, 0);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("exponential has unit mean and variance") {
  RngStream rng(2, 0);
  double sum = 0.0, sumsq = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double e = rng.exponential();
    sum += e;
    sumsq += e * e;
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sumsq / n == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("substream ids are unique across replication/component pairs") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t rep = 0; rep < 100; ++rep)
    for (std::uint64_t c = 0; c < 8; ++c) CHECK(seen.insert(hwq::substream_id(rep, c)).second);
}
