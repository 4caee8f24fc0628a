#pragma once

#include <cstddef>
#include <functional>

namespace tailrisk {

// Number of worker threads: the TAILRISK_THREADS environment variable if set
// (clamped to [1, 256]), otherwise the hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count). Work is split into contiguous chunks by
// index, one chunk per worker. Each body(i) must write only to slot i of
// pre-sized output storage; with that discipline results are identical for
// any thread count, including 1.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tailrisk
