#pragma once
#include <cstddef>
#include <functional>

namespace flatlens {

// worker count from FLATLENS_THREADS, else hardware concurrency
unsigned worker_count();
// runs fn(i) for i in [0, n); results must be written to slot i by fn
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace flatlens
