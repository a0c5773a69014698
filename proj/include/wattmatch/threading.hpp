// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_THREADING_HPP
#define WATTMATCH_THREADING_HPP

#include <cstddef>
#include <functional>

namespace wattmatch {

/// Resolves a thread-count request: 0 means "use WATTMATCH_THREADS if set,
/// else the hardware concurrency". Always returns at least 1.
std::size_t resolve_threads(std::size_t requested);

/// Runs fn(i) for every i in [0, count) on a transient worker pool. Work
/// items must write only to their own output slots; results are then
/// independent of the schedule. The first exception thrown by a worker is
/// rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace wattmatch

#endif
