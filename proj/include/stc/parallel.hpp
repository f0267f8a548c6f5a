#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace stc {

inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(block, worker) for every block in [0, blocks). Work is handed out
// through a shared counter; callers must make results independent of the
// block-to-worker assignment (e.g. accumulate per block, merge by block index).
inline void parallel_blocks(long blocks, int threads,
                            const std::function<void(long, int)>& fn) {
    const int workers =
        static_cast<int>(std::max<long>(1, std::min<long>(effective_threads(threads), blocks)));
    if (workers == 1) {
        for (long b = 0; b < blocks; ++b) fn(b, 0);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (;;) {
                const long b = next.fetch_add(1);
                if (b >= blocks) return;
                fn(b, w);
            }
        });
    for (auto& t : pool) t.join();
}

}  // namespace stc
