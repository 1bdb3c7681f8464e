#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace msc {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
/// dealt round-robin, so results must be written to per-index slots. If any
/// call throws, the exception from the lowest failing index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace msc
