#ifndef SHADOW_PARALLEL_HPP
#define SHADOW_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace shadow {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(i) for i in [0, count) on up to `threads` workers using a static
// contiguous partition.  Results must be written to index-addressed storage so
// the outcome is independent of the number of workers and their scheduling.
// The first exception thrown by any worker is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t count, const Body& body, int threads = 0) {
    const int t = std::min<std::size_t>(resolve_threads(threads), count == 0 ? 1 : count);
    if (t <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(t);
    const std::size_t chunk = (count + t - 1) / t;
    for (int w = 0; w < t; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        workers.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace shadow

#endif
