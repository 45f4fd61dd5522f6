#include "mdsrel/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mdsrel {

namespace {
std::atomic<int> g_override{0};
}

int thread_count() {
    const int forced = g_override.load(std::memory_order_relaxed);
    if (forced > 0) return forced;
    if (const char* env = std::getenv("MDSREL_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int count) {
    if (count < 0) throw std::domain_error("set_thread_count: negative count");
    g_override.store(count, std::memory_order_relaxed);
}

void parallel_for(int64_t n, const std::function<void(int64_t)>& fn) {
    if (n <= 0) return;
    const int workers = static_cast<int>(std::min<int64_t>(thread_count(), n));
    if (workers <= 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers - 1));
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto run = [&](int64_t lo, int64_t hi) {
        try {
            for (int64_t i = lo; i < hi && !failed.load(std::memory_order_relaxed); ++i) fn(i);
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
    };
    for (int w = 1; w < workers; ++w) {
        const int64_t lo = w * chunk;
        const int64_t hi = std::min<int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back(run, lo, hi);
    }
    run(0, std::min<int64_t>(n, chunk));
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mdsrel
