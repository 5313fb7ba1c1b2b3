#pragma once

#include <cstddef>
#include <functional>

namespace isofield {

// Worker count: set_thread_count override, else ISOFIELD_THREADS, else hardware concurrency.
int thread_count();
// n <= 0 restores the default.
void set_thread_count(int n);

// Calls f(i) for i in [0, n) on the worker pool; rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace isofield
