#pragma once

#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace specker {

/// Default worker count: the hardware concurrency, at least 1.
inline int default_workers() {
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

/// Split [0, items) into `workers` contiguous chunks and run fn(begin, end,
/// worker) on each, one thread per nonempty chunk. The first exception (by
/// worker index) is rethrown after all threads join.
template <class F>
void run_chunks(std::size_t items, int workers, F&& fn) {
    if (workers < 1) workers = 1;
    if (static_cast<std::size_t>(workers) > items) workers = static_cast<int>(items == 0 ? 1 : items);
    if (workers == 1) {
        fn(std::size_t{0}, items, 0);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
        std::size_t begin = items * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
        std::size_t end = items * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
        threads.emplace_back([&, begin, end, w] {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Uniform draw from [0, bound) by rejection on mt19937_64; unlike
/// std::uniform_int_distribution the output is identical on every platform.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <class T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace specker
