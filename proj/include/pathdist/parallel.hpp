#pragma once

#include <cstddef>
#include <functional>

namespace pathdist {

/// Runs task(i) for every i in [0, count) on up to `workers` threads.
/// Tasks are handed out through a shared counter, so any task may run on any
/// thread; callers write results by index. The first exception thrown by a
/// task stops the hand-out and is rethrown once all threads have joined.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task);

}  // namespace pathdist
