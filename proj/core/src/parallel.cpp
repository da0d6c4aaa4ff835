#include "latcert/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "latcert/errors.hpp"
#include "latcert/report.hpp"

namespace latcert {

int default_workers() {
    if (const char* env = std::getenv(kWorkersEnvVar)) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
            // Malformed value: fall through to hardware concurrency.
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int resolve_workers(int requested) {
    return requested >= 1 ? requested : default_workers();
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    workers = resolve_workers(workers);
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);

    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    constexpr std::size_t kBlock = 16;

    auto run = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(kBlock);
            if (begin >= n) return;
            const std::size_t end = begin + kBlock < n ? begin + kBlock : n;
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(n);  // Drain remaining work.
                    return;
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();

    if (error) std::rethrow_exception(error);
}

}  // namespace latcert
