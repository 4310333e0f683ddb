#pragma once

#include <cstddef>
#include <functional>

namespace ivnow {

// Runs fn(i) for i in [0, n). Work items must be independent and write only
// to their own slots so the result is identical for any thread count.
// threads <= 1 runs inline; threads == 0 uses hardware concurrency.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

int resolve_threads(int requested);

}  // namespace ivnow
