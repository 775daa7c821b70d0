#pragma once

#include <cstdint>
#include <functional>

namespace multinet {

/// Number of worker threads: hardware concurrency capped by the
/// MULTINET_THREADS environment variable (read once per process).
int worker_count();

/// Runs fn(i) for i in [begin, end) on up to worker_count() threads.
/// Work is handed out in fixed-size chunks through a shared counter, so
/// callers needing a deterministic reduction must write results into
/// per-index (or per-chunk) slots and combine them in index order afterwards.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

} // namespace multinet
