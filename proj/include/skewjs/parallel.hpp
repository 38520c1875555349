#pragma once

#include <cstddef>
#include <functional>

namespace skewjs {

/// Worker count for internal parallel loops: `SKEWJS_THREADS` when set to a
/// positive integer, otherwise the hardware concurrency.
[[nodiscard]] std::size_t worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is written
/// by exactly one worker so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace skewjs
