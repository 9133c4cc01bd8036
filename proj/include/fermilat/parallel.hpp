#pragma once

#include <cstdint>
#include <functional>

namespace fermilat::detail {

/// Worker count: hardware concurrency, capped by the FERMILAT_THREADS
/// environment variable when set.
int thread_budget();

/// Runs body(begin, end) on disjoint index ranges covering [0, n), possibly
/// from several threads. Results must be written to per-index slots so the
/// outcome does not depend on scheduling. Exceptions are rethrown to the
/// caller (first one wins).
void parallel_chunks(long n, const std::function<void(long, long)>& body);

}  // namespace fermilat::detail
