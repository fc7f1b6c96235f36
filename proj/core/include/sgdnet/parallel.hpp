#pragma once

#include <cstddef>
#include <functional>

namespace sgdnet {

// Process-wide worker count for row-parallel kernels. Kernels partition rows
// into disjoint blocks so results are identical for any thread count.
void set_num_threads(unsigned n);
unsigned num_threads();

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& block);

}  // namespace sgdnet
