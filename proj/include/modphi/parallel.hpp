#pragma once

#include <cstddef>
#include <functional>

namespace modphi {

/// Worker cap used by every parallel loop. Defaults to the MODPHI_THREADS
/// environment variable when set, else 1.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, count). Iterations are distributed over
/// thread_count() workers; callers write results into slot i and reduce in
/// index order afterwards, so the outcome never depends on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace modphi
