#pragma once

#include <cstddef>
#include <functional>

namespace pforge {

/// Worker count: PRESSURE_FORGE_THREADS if set and positive, else the hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Each index
/// runs exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pforge
