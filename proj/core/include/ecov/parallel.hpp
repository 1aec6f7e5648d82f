#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ecov {

/// Runs fn(chunk_index) for chunk_index in [0, chunks) on `workers` threads
/// and returns results indexed by chunk. The chunk decomposition is fixed by
/// the caller (never derived from the worker count) and merging happens in
/// chunk order, so outputs are bit-identical at any worker count.
template <typename R, typename Fn>
std::vector<R> run_chunked(std::size_t chunks, int workers, Fn&& fn) {
    std::vector<R> out(chunks);
    if (workers <= 1 || chunks <= 1) {
        for (std::size_t i = 0; i < chunks; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= chunks) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    int nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), chunks);
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

/// Number of fixed-size chunks covering `items`.
inline std::size_t chunk_count(std::size_t items, std::size_t chunk_size) {
    return items == 0 ? 0 : (items + chunk_size - 1) / chunk_size;
}

} // namespace ecov
