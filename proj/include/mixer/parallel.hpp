#pragma once

#include <cstddef>
#include <functional>

namespace mixer {

// Worker cap shared by every parallel loop; 0 means hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

// Runs body(i) for i in [0, n). Each index runs exactly once; callers write
// results into per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mixer
