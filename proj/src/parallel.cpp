#include "boltzmix/parallel.hpp"

#include <algorithm>
#include <thread>

namespace bmx {

ThreadPool::ThreadPool(unsigned workers) : workers_(workers) {
  if (workers_ == 0) workers_ = std::max(1u, std::thread::hardware_concurrency());
}

void ThreadPool::parallel_for(std::size_t n,
                              const std::function<void(std::size_t, std::size_t)>& fn) const {
  if (n == 0) return;
  const unsigned nw = static_cast<unsigned>(std::min<std::size_t>(workers_, n));
  if (nw <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(nw);
  const std::size_t chunk = (n + nw - 1) / nw;
  for (unsigned t = 0; t < nw; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    threads.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : threads) th.join();
}

void ThreadPool::parallel_for_each(std::size_t n,
                                   const std::function<void(std::size_t)>& fn) const {
  parallel_for(n, [&fn](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

namespace {

constexpr std::size_t kBlock = 1024;

double pairwise(const double* p, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(p, h) + pairwise(p + h, n - h);
}

}  // namespace

double deterministic_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kBlock;
    partial[b] = pairwise(values.data() + lo, std::min(kBlock, n - lo));
  }
  return pairwise(partial.data(), nblocks);
}

double deterministic_sum(const ThreadPool& pool, std::size_t n,
                         const std::function<double(std::size_t)>& fn) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks);
  pool.parallel_for(nblocks, [&](std::size_t bb, std::size_t be) {
    for (std::size_t b = bb; b < be; ++b) {
      const std::size_t lo = b * kBlock;
      const std::size_t hi = std::min(n, lo + kBlock);
      std::vector<double> tmp(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) tmp[i - lo] = fn(i);
      partial[b] = pairwise(tmp.data(), tmp.size());
    }
  });
  return pairwise(partial.data(), partial.size());
}

}  // namespace bmx
