#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace entityrank {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
/// handed out dynamically but results must be written by index, so output
/// order (and therefore every produced file) is independent of the thread
/// count. threads == 0 means hardware concurrency. The first exception
/// thrown by fn is rethrown on the calling thread.
template <typename Fn>
void parallel_for(size_t n, size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max<size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&]() {
            try {
                for (size_t i = next.fetch_add(1); i < n && !failed.load(); i = next.fetch_add(1)) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        });
    }
    for (std::thread& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace entityrank
