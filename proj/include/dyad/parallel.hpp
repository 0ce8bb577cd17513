#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace dyad {

/// Evaluate fn(0..count-1) and return the results ordered by index. Work
/// items must be independent; outputs land in index order, so the result is
/// identical for any thread count.
template <class T, class Fn>
std::vector<T> parallel_map(std::int64_t count, int threads, Fn&& fn) {
    std::vector<T> out(static_cast<std::size_t>(count));
    if (threads <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    const int workers = static_cast<int>(std::min<std::int64_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t i = w; i < count; i += workers) {
                out[static_cast<std::size_t>(i)] = fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace dyad
