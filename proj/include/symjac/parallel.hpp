#pragma once

#include <cstddef>
#include <functional>

namespace symjac {

// Worker cap shared by every parallel loop; 0 restores hardware concurrency.
void set_thread_limit(unsigned n);
unsigned thread_limit();

// Runs body(i) once for every i in [0, n). Callers write results to per-index
// slots, so the outcome does not depend on scheduling. If any call throws, the
// exception of the smallest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace symjac
