#ifndef TORIC_SRC_PARALLEL_HPP
#define TORIC_SRC_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "toric/spectral.hpp"

namespace toric::detail {

/// Calls run(begin, end) over contiguous chunks of [0, count) on up to
/// worker_count() threads. Each index is handled exactly once, so writing
/// into slot i keeps results independent of the thread count. The first
/// exception from any chunk is rethrown after all threads join.
template <typename Run>
void parallel_chunks(std::size_t count, const Run& run, std::size_t min_chunk = 256) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(worker_count()), std::max<std::size_t>(count / min_chunk, 1));
    if (workers <= 1) {
        run(std::size_t{0}, count);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                run(w * chunk, std::min(count, (w + 1) * chunk));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace toric::detail

#endif  // TORIC_SRC_PARALLEL_HPP
