#pragma once

#include <cstddef>
#include <functional>

namespace spinvault {

/// Worker count from SPINVAULT_THREADS, falling back to the hardware
/// concurrency. Always >= 1.
unsigned worker_count();

/// Calls body(i) for i in [0, n) across `workers` threads. Each index is
/// visited exactly once; callers write into per-index slots and reduce in
/// index order afterwards, so results never depend on the worker count.
/// The first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned workers = worker_count());

}  // namespace spinvault
