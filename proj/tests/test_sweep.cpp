#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hcm/rng.hpp"
#include "hcm/sweep.hpp"

using namespace hcm;

namespace {

// Deterministic but irregular workload; expensive enough that the parallel
// path actually splits it across threads.
double workload(std::size_t i) {
  Rng rng(911, i);
  double acc = 0.0;
  for (int k = 0; k < 50; ++k) acc += std::sin(rng.next_gaussian() + acc);
  return acc;
}

}  // namespace

TEST_CASE("parallel argmax matches the serial reference bitwise") {
  for (std::size_t count : {1u, 7u, 64u, 1000u, 4097u}) {
    const auto serial = sweep::argmax_over_serial(count, workload);
    const auto parallel = sweep::argmax_over(count, workload);
    REQUIRE(parallel.value == serial.value);
    REQUIRE(parallel.index == serial.index);
  }
}

TEST_CASE("ties resolve to the lowest index") {
  auto plateau = [](std::size_t i) { return i >= 3 && i <= 9 ? 5.0 : 0.0; };
  CHECK(sweep::argmax_over_serial(20, plateau).index == 3);
  CHECK(sweep::argmax_over(20, plateau).index == 3);

  auto constant = [](std::size_t) { return -2.5; };
  CHECK(sweep::argmax_over(100, constant).index == 0);
  CHECK(sweep::argmax_over(100, constant).value == -2.5);
}

TEST_CASE("max_over of an empty range is zero") {
  auto never = [](std::size_t) -> double {
    FAIL("must not be called");
    return 0.0;
  };
  CHECK(sweep::max_over(0, never) == 0.0);
  CHECK(sweep::max_over_serial(0, never) == 0.0);
}

TEST_CASE("max_over handles negative-only values") {
  auto neg = [](std::size_t i) { return -1.0 - static_cast<double>(i); };
  CHECK(sweep::max_over(10, neg) == -1.0);
}

TEST_CASE("for_each_index visits every slot exactly once") {
  std::vector<std::atomic<int>> hits(513);
  sweep::for_each_index(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) REQUIRE(h.load() == 1);

  // Zero count is a no-op.
  sweep::for_each_index(0, [&](std::size_t) { FAIL("must not be called"); });
}

TEST_CASE("parallel fill then serial reduce reproduces direct evaluation") {
  std::vector<double> slots(2048);
  sweep::for_each_index(slots.size(), [&](std::size_t i) { slots[i] = workload(i); });
  for (std::size_t i = 0; i < slots.size(); ++i) REQUIRE(slots[i] == workload(i));
}
