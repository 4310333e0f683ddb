#include "ivnow/core/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace ivnow {

int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
    int t = resolve_threads(threads);
    if (t <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load())
                return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int workers = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(t)));
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace ivnow
