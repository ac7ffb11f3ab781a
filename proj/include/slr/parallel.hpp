#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace slr {

/// Worker cap: SLR_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. The body must write only to locations owned by its chunk.
template <typename Body>
void parallel_for_chunks(std::size_t n, Body&& body) {
    std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        if (n > 0) body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t step = (n + workers - 1) / workers;
    for (std::size_t begin = 0; begin < n; begin += step) {
        std::size_t end = std::min(n, begin + step);
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace slr
