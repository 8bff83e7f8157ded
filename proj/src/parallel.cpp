#include "statdec/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace statdec {

std::size_t thread_count() {
    static const std::size_t cached = [] {
        std::size_t n = std::max<unsigned>(1, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("STATDEC_THREADS")) {
            const long cap = std::strtol(env, nullptr, 10);
            if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
        }
        return n;
    }();
    return cached;
}

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        if (n > 0) fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace statdec
