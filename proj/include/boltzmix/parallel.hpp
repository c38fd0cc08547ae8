#ifndef BOLTZMIX_PARALLEL_HPP
#define BOLTZMIX_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bmx {

// Fixed-size fork/join worker pool. Work items are distributed in contiguous
// chunks; results that must not depend on the worker count go through
// deterministic_sum instead of per-thread accumulators.
class ThreadPool {
 public:
  // workers == 0 resolves to hardware concurrency.
  explicit ThreadPool(unsigned workers = 0);

  unsigned workers() const { return workers_; }

  // Runs fn(begin, end) on disjoint ranges covering [0, n).
  void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) const;

  // Per-index convenience wrapper.
  void parallel_for_each(std::size_t n, const std::function<void(std::size_t)>& fn) const;

 private:
  unsigned workers_;
};

// Pairwise summation over fixed-size blocks. The reduction tree depends only
// on the length, so results are bitwise reproducible for any worker count.
double deterministic_sum(std::span<const double> values);

// Sum of fn(i) for i in [0, n), same fixed tree, evaluated in parallel.
double deterministic_sum(const ThreadPool& pool, std::size_t n,
                         const std::function<double(std::size_t)>& fn);

}  // namespace bmx

#endif
