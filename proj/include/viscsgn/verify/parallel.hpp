#pragma once

#include <functional>

namespace viscsgn::verify {

/// Worker cap: VISC_SGN_THREADS if set and positive, else the hardware count.
int worker_count();

/// Runs body(i) for i in [0, n) over worker_count() threads. Each index is
/// handled exactly once; callers write results to per-index slots.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace viscsgn::verify
