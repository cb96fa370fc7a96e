#include "acceptmc/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace acceptmc {

void parallel_for(std::int64_t n_tasks, int workers,
                  const std::function<void(std::int64_t)>& fn) {
    if (n_tasks <= 0) return;
    const int n_threads =
        static_cast<int>(std::min<std::int64_t>(std::max(workers, 1), n_tasks));
    if (n_threads == 1) {
        for (std::int64_t k = 0; k < n_tasks; ++k) fn(k);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::int64_t k = next.fetch_add(1);
            if (k >= n_tasks) break;
            try {
                fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace acceptmc
