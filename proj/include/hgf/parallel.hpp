#pragma once

#include <cstddef>
#include <functional>

namespace hgf {

/// Worker count: HGF_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(begin, end) on disjoint contiguous chunks of [0, n).
/// Chunks write to disjoint outputs, so results do not depend on the
/// worker count. Runs inline when n is small or only one worker is allowed.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 4096);

}  // namespace hgf
