#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace onomastat {

// Number of chunks run_chunked will use for `count` items on `workers`
// threads. Callers size one accumulator per chunk.
inline unsigned chunk_count(std::size_t count, unsigned workers) {
    if (workers <= 1 || count < 2) return 1;
    return static_cast<unsigned>(std::min<std::size_t>(workers, count));
}

// Runs fn(first, last, slot) over contiguous chunks of [0, count).
// slot is the chunk ordinal in [0, chunk_count(count, workers)). Keep one
// accumulator per slot and combine after; with commutative integer merges
// the result is bit-identical for any worker count.
template <typename Fn>
void run_chunked(std::size_t count, unsigned workers, Fn&& fn) {
    unsigned chunks = chunk_count(count, workers);
    if (chunks == 1) {
        fn(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    std::size_t base = count / chunks, rem = count % chunks, start = 0;
    for (unsigned c = 0; c < chunks; ++c) {
        std::size_t len = base + (c < rem ? 1 : 0);
        pool.emplace_back([&fn, start, len, c] { fn(start, start + len, c); });
        start += len;
    }
    for (auto& t : pool) t.join();
}

}  // namespace onomastat
