#pragma once

#include <cstddef>
#include <functional>

namespace bhankel {

/// Worker count used by parallel_for. Defaults to the hardware concurrency;
/// 0 restores the default.
void set_thread_count(int threads);
int thread_count();

/// Runs body(lo, hi) over a static partition of [0, n). Each index is owned
/// by exactly one call, so results never depend on the thread count as long
/// as body writes only to its own indices.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace bhankel
