#pragma once

#include <functional>

namespace sgmproxy {

/// Runs fn(i) for i in [begin, end) over up to `threads` workers, using
/// contiguous static chunks. threads <= 1 runs inline.
void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn);

}  // namespace sgmproxy
