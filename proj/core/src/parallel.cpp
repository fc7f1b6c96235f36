#include "sgdnet/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sgdnet {

namespace {
std::atomic<unsigned> g_threads{1};
constexpr std::size_t kMinRowsPerThread = 256;
}  // namespace

void set_num_threads(unsigned n) { g_threads.store(std::max(1u, n)); }

unsigned num_threads() { return g_threads.load(); }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& block) {
    if (end <= begin) return;
    const std::size_t total = end - begin;
    const std::size_t workers =
        std::min<std::size_t>(num_threads(), std::max<std::size_t>(1, total / kMinRowsPerThread));
    if (workers <= 1) {
        block(begin, end);
        return;
    }
    const std::size_t chunk = (total + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t lo = begin + w * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&block, lo, hi] { block(lo, hi); });
    }
    block(begin, std::min(end, begin + chunk));
}

}  // namespace sgdnet
