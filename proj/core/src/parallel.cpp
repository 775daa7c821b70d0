#include "multinet/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace multinet {

int worker_count() {
    static const int count = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
        if (const char* env = std::getenv("MULTINET_THREADS")) {
            char* end = nullptr;
            long cap = std::strtol(env, &end, 10);
            if (end != env && cap > 0 && cap < n) n = static_cast<int>(cap);
        }
        return n;
    }();
    return count;
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    const int total = end - begin;
    if (total <= 0) return;
    const int workers = std::min(worker_count(), total);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }

    std::atomic<int> next{begin};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= end) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) threads.emplace_back(body);
    body();
    for (auto& t : threads) t.join();

    if (first_error) std::rethrow_exception(first_error);
}

} // namespace multinet
