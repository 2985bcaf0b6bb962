// Copyright 2026 The minent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MINENT_PARALLEL_HPP
#define MINENT_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace minent {

/// Worker count used by data-parallel loops. Defaults to $MINENT_THREADS or 1.
int thread_count();
void set_thread_count(int threads);

/// Calls `body(begin, end)` over fixed-size chunks of [0, n). Chunk boundaries
/// depend only on `n` and `chunk`, never on the worker count.
void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Order-stable blocked reduction: each block of `chunk` indices is mapped to a
/// partial result, and partials are combined left to right in block order.
/// The result is bit-identical for any worker count.
template <class T, class MapBlock, class Combine>
T blocked_reduce(std::size_t n, std::size_t chunk, T init, MapBlock map_block, Combine combine) {
  if (n == 0) {
    return init;
  }
  const std::size_t blocks = (n + chunk - 1) / chunk;
  std::vector<T> partial(blocks, init);
  parallel_for(blocks, 1, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t begin = b * chunk;
      const std::size_t end = begin + chunk < n ? begin + chunk : n;
      partial[b] = map_block(begin, end);
    }
  });
  T acc = std::move(init);
  for (auto& p : partial) {
    acc = combine(std::move(acc), p);
  }
  return acc;
}

}  // namespace minent

#endif  // MINENT_PARALLEL_HPP
