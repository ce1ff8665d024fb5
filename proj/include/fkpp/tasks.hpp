#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

namespace fkpp {

/// Runs f(0..n-1) on up to `jobs` concurrent tasks. Each index writes its own
/// slot, so results do not depend on scheduling. The first exception (lowest
/// index) is rethrown after all tasks finish.
template <class F>
void for_each_index(std::size_t n, int jobs, F&& f) {
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    if (width == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    for (std::size_t start = 0; start < n; start += width) {
        std::vector<std::future<void>> batch;
        const std::size_t stop = std::min(n, start + width);
        for (std::size_t i = start; i < stop; ++i) batch.push_back(std::async(std::launch::async, [&f, i] { f(i); }));
        for (auto& fut : batch) fut.wait();
        for (auto& fut : batch) fut.get();
    }
}

}  // namespace fkpp
