#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace wulffcurv {

/// Worker count: WULFFCURV_THREADS if set (>= 1), otherwise hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once and
/// writes only to its own output slot, so results do not depend on scheduling.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation; fixed association order for determinism.
double pairwise_sum(std::span<const double> values);

}  // namespace wulffcurv
