#include "speclab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace speclab {

namespace {

std::atomic<unsigned> g_threads{1};
thread_local bool t_in_worker = false;

// Marks the current thread as a pool worker for its lifetime in scope, so
// nested parallel_for calls run inline instead of multiplying threads.
struct WorkerScope {
    bool saved;
    WorkerScope() : saved(t_in_worker) { t_in_worker = true; }
    ~WorkerScope() { t_in_worker = saved; }
};

unsigned env_threads() {
    const char* s = std::getenv("LANDAU_SPECLAB_THREADS");
    if (!s || !*s) return 0;
    try {
        const long v = std::stol(s);
        return v > 0 ? static_cast<unsigned>(std::min<long>(v, 1024)) : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

void set_thread_count(unsigned n) { g_threads = std::max(1u, n); }

unsigned thread_count() {
    if (unsigned e = env_threads()) return e;
    return g_threads.load();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = t_in_worker ? 1 : std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = n;
    std::exception_ptr err;
    auto work = [&] {
        WorkerScope scope;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace speclab
