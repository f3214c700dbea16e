#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hardy::detail {

// Accumulator concept: default-constructible, operator+= with itself.
// Plain double and std::array<double, K> (via Terms) both qualify.

template <std::size_t K>
struct Terms {
    std::array<double, K> v{};
    Terms& operator+=(const Terms& o) {
        for (std::size_t i = 0; i < K; ++i) v[i] += o.v[i];
        return *this;
    }
    double& operator[](std::size_t i) { return v[i]; }
    const double& operator[](std::size_t i) const { return v[i]; }
};

// Deterministic blocked reduction: the index range is cut into fixed-size
// blocks, each block is summed in index order, and block partials are
// combined by pairwise halving. The result does not depend on the number
// of worker threads, and the pairwise tree keeps rounding error at
// O(log(nblocks)) ulps instead of O(n).
template <class Acc, class BlockFn>
Acc blocked_pairwise_sum(std::size_t count, std::size_t block_size, BlockFn&& block_fn,
                         unsigned threads = std::thread::hardware_concurrency()) {
    if (count == 0) return Acc{};
    const std::size_t nblocks = (count + block_size - 1) / block_size;
    std::vector<Acc> partial(nblocks);

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker_body = [&](std::atomic<std::size_t>& next) {
        try {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= nblocks) break;
                const std::size_t lo = b * block_size;
                const std::size_t hi = lo + block_size < count ? lo + block_size : count;
                partial[b] = block_fn(lo, hi);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads <= 1 || nblocks == 1) {
        std::atomic<std::size_t> next{0};
        worker_body(next);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned nt = threads < nblocks ? threads : static_cast<unsigned>(nblocks);
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back([&] { worker_body(next); });
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // pairwise combine in index order
    std::size_t m = nblocks;
    while (m > 1) {
        const std::size_t half = m / 2;
        for (std::size_t i = 0; i < half; ++i) partial[i] += partial[m - 1 - i];
        m = (m + 1) / 2;
    }
    return partial[0];
}

}  // namespace hardy::detail
