#pragma once

#include <cstdint>
#include <functional>

namespace peaks {

// Global worker count used by all node-wise loops. n <= 0 selects the
// hardware concurrency. 1 disables threading.
void set_worker_count(int n);
int worker_count();

// Runs body(begin, end) over a fixed partition of [0, n) into chunks of the
// given size. The partition does not depend on the worker count, so
// reductions built on it are reproducible.
void parallel_for(std::int64_t n, std::int64_t chunk,
                  const std::function<void(std::int64_t, std::int64_t)>& body);
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

// Deterministic sum reduction: chunk partial sums are accumulated in chunk
// order regardless of how chunks were scheduled, so the result is
// bit-identical for any worker count.
double parallel_sum(std::int64_t n, std::int64_t chunk,
                    const std::function<double(std::int64_t, std::int64_t)>& chunk_sum);
double parallel_sum(std::int64_t n,
                    const std::function<double(std::int64_t, std::int64_t)>& chunk_sum);

}  // namespace peaks
