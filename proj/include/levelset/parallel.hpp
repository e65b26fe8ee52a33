#ifndef LEVELSET_PARALLEL_HPP
#define LEVELSET_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace levelset {

/// Worker count: min(hardware, LEVELSET_THREADS if set).
inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("LEVELSET_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

namespace detail {
inline thread_local bool inside_parallel = false;
}

/// Runs fn(i) for i in [0, count) over a shared atomic counter.
/// fn must only write to slots owned by its index; reductions stay
/// deterministic because results are stored per index and combined in order
/// by the caller. Nested calls run serially.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || count <= 1 || detail::inside_parallel) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        detail::inside_parallel = true;
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
        detail::inside_parallel = false;
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

}  // namespace levelset

#endif
