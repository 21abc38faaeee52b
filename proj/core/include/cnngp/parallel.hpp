#pragma once

#include <cstddef>
#include <functional>

namespace cnngp {

/// Worker count used by parallel loops. Defaults to the CNNGP_NUM_THREADS
/// environment variable, else std::thread::hardware_concurrency().
std::size_t num_threads();
void set_num_threads(std::size_t n);  ///< 0 restores the default.

/// Runs body(i) for i in [begin, end) over contiguous chunks. Each index is
/// visited exactly once; results must be written to per-index slots so the
/// outcome does not depend on scheduling. The exception raised at the smallest index is rethrown.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace cnngp
