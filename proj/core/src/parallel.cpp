#include "peaks/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace peaks {

namespace {

int g_workers = 1;
constexpr std::int64_t kDefaultChunk = 1 << 16;

void run_chunked(std::int64_t nchunks, const std::function<void(std::int64_t)>& chunk_body) {
  const int workers = static_cast<int>(std::min<std::int64_t>(g_workers, nchunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < nchunks; ++c) chunk_body(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto run = [&]() {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= nchunks) break;
      chunk_body(c);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace

void set_worker_count(int n) {
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  g_workers = std::max(1, n);
}

int worker_count() { return g_workers; }

void parallel_for(std::int64_t n, std::int64_t chunk,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (n <= 0) return;
  chunk = std::max<std::int64_t>(1, chunk);
  const std::int64_t nchunks = (n + chunk - 1) / chunk;
  run_chunked(nchunks, [&](std::int64_t c) {
    const std::int64_t lo = c * chunk;
    body(lo, std::min(n, lo + chunk));
  });
}

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
  parallel_for(n, kDefaultChunk, body);
}

double parallel_sum(std::int64_t n, std::int64_t chunk,
                    const std::function<double(std::int64_t, std::int64_t)>& chunk_sum) {
  if (n <= 0) return 0.0;
  chunk = std::max<std::int64_t>(1, chunk);
  const std::int64_t nchunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
  run_chunked(nchunks, [&](std::int64_t c) {
    const std::int64_t lo = c * chunk;
    partial[static_cast<std::size_t>(c)] = chunk_sum(lo, std::min(n, lo + chunk));
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double parallel_sum(std::int64_t n,
                    const std::function<double(std::int64_t, std::int64_t)>& chunk_sum) {
  return parallel_sum(n, kDefaultChunk, chunk_sum);
}

}  // namespace peaks
