#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fblab/parallel.hpp"

using namespace fblab;

TEST(WorkerCount, EnvironmentOverride) {
  ::setenv("FBLAB_THREADS", "5", 1);
  EXPECT_EQ(worker_count(), 5);
  ::setenv("FBLAB_THREADS", "0", 1);
  EXPECT_GE(worker_count(), 1);
  ::setenv("FBLAB_THREADS", "lots", 1);
  EXPECT_GE(worker_count(), 1);
  ::unsetenv("FBLAB_THREADS");
  const unsigned hw = std::thread::hardware_concurrency();
  EXPECT_EQ(worker_count(), hw == 0 ? 1 : static_cast<int>(hw));
}

TEST(ParallelFor, EveryIndexOnce) {
  for (int workers : {1, 2, 7}) {
    const std::size_t n = 1000;
    std::vector<std::atomic<int>> hits(n);
    parallel_for(n, [&](std::size_t k) { hits[k]++; }, workers);
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(hits[k].load(), 1) << workers << " " << k;
  }
}

TEST(ParallelFor, EmptyRangeAndMoreWorkersThanWork) {
  int calls = 0;
  parallel_for(0, [&](std::size_t) { ++calls; }, 4);
  EXPECT_EQ(calls, 0);
  std::vector<int> out(3, 0);
  parallel_for(3, [&](std::size_t k) { out[k] = static_cast<int>(k) + 1; }, 16);
  EXPECT_EQ(out, (std::vector<int>{1, 2, 3}));
}

TEST(ParallelFor, IndexedResultsDoNotDependOnWorkers) {
  auto run = [](int workers) {
    std::vector<double> v(257);
    parallel_for(v.size(), [&](std::size_t k) { v[k] = 1.0 / (1.0 + static_cast<double>(k * k)); }, workers);
    return v;
  };
  EXPECT_EQ(run(1), run(3));
  EXPECT_EQ(run(1), run(8));
}

TEST(ParallelFor, RethrowsAfterJoin) {
  for (int workers : {1, 4}) {
    std::atomic<int> done{0};
    EXPECT_THROW(parallel_for(
                     200,
                     [&](std::size_t k) {
                       if (k == 37) throw std::runtime_error("boom");
                       ++done;
                     },
                     workers),
                 std::runtime_error);
    if (workers > 1) EXPECT_EQ(done.load(), 199);
  }
}

TEST(ParallelFor, UsesSeveralThreads) {
  std::mutex mu;
  std::set<std::thread::id> ids;
  std::atomic<int> arrived{0};
  parallel_for(
      2,
      [&](std::size_t) {
        ++arrived;
        // both calls must be in flight at once
        while (arrived.load() < 2) std::this_thread::yield();
        std::lock_guard lock(mu);
        ids.insert(std::this_thread::get_id());
      },
      2);
  EXPECT_EQ(ids.size(), 2u);
}
