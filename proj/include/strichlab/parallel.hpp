#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace strichlab {

/// Number of worker threads; honours STRICHLAB_THREADS when set to a
/// positive integer, otherwise std::thread::hardware_concurrency().
int worker_count();

/// Runs body(i) for i in [0, n) across worker threads.  Each index is
/// processed exactly once; callers store per-index results and reduce them
/// sequentially afterwards, which keeps sums bitwise reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Maps f over [0, n) in parallel and returns the results in index order.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

/// Fixed-order sum of per-index contributions computed in parallel.
template <typename T, typename F>
T parallel_sum(std::size_t n, F&& f) {
    const auto parts = parallel_map<T>(n, std::forward<F>(f));
    T acc{};
    for (const auto& p : parts) acc += p;
    return acc;
}

}  // namespace strichlab
