#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

#include "fundiff/cli.hpp"

namespace fundiff::cli {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, n); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    // Report the failure a sequential run would have hit first.
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace fundiff::cli
