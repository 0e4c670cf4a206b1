#ifndef ROSEN_PARALLEL_HPP
#define ROSEN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace rosen {

// Dynamic-schedule loop over [0, n). Results stay deterministic as long as
// fn(i) touches only slot i of its outputs.
template <class Fn>
void parallel_for(long n, int workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    int w = static_cast<int>(std::min<long>(workers, n));
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t)
        pool.emplace_back([&] {
            long i;
            while ((i = next.fetch_add(1)) < n) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace rosen

#endif
