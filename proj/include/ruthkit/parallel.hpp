#pragma once

#include <functional>

namespace ruthkit {

/// Worker count from RUTHKIT_WORKERS (default 1). Results never depend on it.
int worker_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks across workers.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace ruthkit
