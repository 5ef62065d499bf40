#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace voxsie {

// Number of worker threads: VOXSIE_THREADS, else hardware concurrency.
inline int worker_count() {
    if (const char* e = std::getenv("VOXSIE_THREADS")) {
        const int n = std::atoi(e);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// f(i) for i in [begin, end); results must not depend on scheduling.
template <class F>
void parallel_for(int begin, int end, F&& f) {
    const int n = end - begin;
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = begin; i < end; ++i) f(i);
        return;
    }
    std::atomic<int> next{begin};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (int i = next++; i < end; i = next++) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                next = end;
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace voxsie
