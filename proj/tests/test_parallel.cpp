#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hwq/parallel.hpp"
#include "hwq/rng.hpp"

namespace {

double workload(std::size_t rep) {
  hwq::RngStream rng(777, hwq::substream_id(rep));
  double acc = 0.0;
  for (int i = 0; i < 2000; ++i) acc += rng.exponential();
  return acc;
}

}  // namespace

TEST_CASE("openmp farm is bit-identical to the serial reference") {
  std::vector<double> serial, parallel;
  hwq::run_replications_serial<double>(500, workload, serial);
  hwq::run_replications_openmp<double>(500, workload, parallel, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("worker count does not change the result") {
  hwq::ParallelOptions one{1}, four{4};
  const auto a = hwq::run_replications<double>(300, workload, one);
  const auto b = hwq::run_replications<double>(300, workload, four);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("resolve_workers prefers the explicit request") {
  CHECK(hwq::resolve_workers(3) == 3);
  CHECK(hwq::resolve_workers(0) >= 1);
}
