// Block-partitioned parallel_for. Work items write to disjoint outputs, so
// results do not depend on the schedule.
#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace seedgrow {

/// Process-wide worker count for parallel sections (CLI --threads).
/// 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n), partitioned into contiguous blocks across
/// min(threads, n) workers. fn must only write state owned by item i.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  if (n <= 0) return;
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const int base = n / workers, extra = n % workers;
  int begin = 0;
  for (int w = 0; w < workers; ++w) {
    const int len = base + (w < extra ? 1 : 0);
    const int end = begin + len;
    pool.emplace_back([&fn, begin, end] {
      for (int i = begin; i < end; ++i) fn(i);
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace seedgrow
