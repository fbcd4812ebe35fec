#pragma once

#include <cstddef>
#include <functional>

namespace transl2e {

// Worker count used by parallel_for. n <= 0 restores the default
// (TRANSL2E_THREADS if set, else hardware concurrency).
void set_max_threads(int n);
int max_threads();

// Static-strided loop over [0, n). fn(i) must only touch state owned by
// index i; results are then independent of the worker count. Nested calls
// from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace transl2e
