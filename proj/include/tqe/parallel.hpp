#pragma once

#include <cstddef>
#include <functional>

namespace tqe {

/// Effective worker count: requested, or hardware concurrency when <= 0.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n). fn must write its result to a caller-owned,
/// index-addressed slot; the caller reduces in index order afterwards, so the
/// outcome is independent of the worker count and of scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace tqe
