#pragma once

#include <cstddef>
#include <functional>

namespace growthlab {

// Worker count used by data-parallel loops. Defaults to 1.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for every i in [0, n). Results must be written by index so that
// any reduction performed afterwards is independent of scheduling. Nested calls
// from inside a worker run sequentially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace growthlab
