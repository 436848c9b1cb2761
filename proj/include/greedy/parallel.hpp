#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace greedy {

// Worker-pool width: GREEDY_LAB_THREADS caps it, hardware_concurrency is the
// default. Always at least 1.
std::size_t worker_count();

// Runs fn(0..n-1) on a static partition of [0, n). Each index is visited by
// exactly one thread, so writes to per-index slots need no synchronization.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace greedy
