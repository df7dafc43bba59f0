#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace conefix {

// Worker count from CONEFIX_THREADS; 0 (the default) runs everything on the
// calling thread.
int thread_count();
void set_thread_count(int n);

// Calls f(i) for i in [0, n). Work items must write to disjoint outputs.
template <typename F>
void parallel_for(std::size_t n, F&& f)
{
    const int t = thread_count();
    if (t <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) f(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace conefix
