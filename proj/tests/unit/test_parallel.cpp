#include "ddd/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace ddd;

TEST_CASE("every index runs exactly once") {
  for (int workers : {1, 3, 16}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, workers);
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("exceptions reach the caller") {
  CHECK_THROWS_AS(parallel_for(
                      50, [](std::size_t i) {
                        if (i == 17) throw std::runtime_error("boom");
                      },
                      4),
                  std::runtime_error);
}

TEST_CASE("DDD_THREADS caps the worker count") {
  setenv("DDD_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("DDD_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  unsetenv("DDD_THREADS");
}
