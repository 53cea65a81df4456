#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zlab {

// Runs fn(chunk_begin, chunk_end) over [0, n) split into fixed chunks of
// `chunk` items. Chunk boundaries depend only on n and chunk, never on the
// worker count, so per-chunk results merged by chunk index are identical
// for any number of workers. Chunks are handed out round-robin by index.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunk, unsigned workers, Fn&& fn) {
    if (n == 0) return;
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(nchunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < nchunks; ++c) fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < nchunks; c += workers)
                    fn(c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

inline unsigned default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

}  // namespace zlab
