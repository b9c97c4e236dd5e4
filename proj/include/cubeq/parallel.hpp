#pragma once

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

namespace cubeq {

// Worker configuration handed to every parallel kernel. Kernels partition
// their work into fixed-size blocks that do not depend on `threads`, so
// floating-point reductions are bit-identical for any worker count.
struct ParallelContext {
  int threads = 1;

  static ParallelContext machine() { return {std::max(1, omp_get_num_procs())}; }
  static ParallelContext serial() { return {1}; }
};

// Resolves the worker count: CUBEQ_THREADS wins over the requested value,
// and the requested value (if positive) wins over machine parallelism.
inline int resolve_threads(int requested) {
  if (const char* env = std::getenv("CUBEQ_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  if (requested >= 1) return requested;
  return std::max(1, omp_get_num_procs());
}

// Pairwise reduction in canonical index order.
template <class T, class Combine>
T pairwise_reduce(std::vector<T> values, T identity, Combine&& combine) {
  if (values.empty()) return identity;
  while (values.size() > 1) {
    std::vector<T> next;
    next.reserve((values.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
      next.push_back(combine(values[i], values[i + 1]));
    }
    if (values.size() % 2 == 1) next.push_back(values.back());
    values = std::move(next);
  }
  return values.front();
}

// Splits [0, count) into blocks of `block` items, evaluates fn(begin, end)
// for each block in parallel and combines the block results pairwise in
// block order.
template <class T, class Fn, class Combine>
T blocked_reduce(std::int64_t count, std::int64_t block, const ParallelContext& ctx,
                 T identity, Fn&& fn, Combine&& combine) {
  if (count <= 0) return identity;
  block = std::max<std::int64_t>(1, block);
  const std::int64_t nblocks = (count + block - 1) / block;
  std::vector<T> partial(static_cast<std::size_t>(nblocks), identity);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, ctx.threads))
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t begin = b * block;
    const std::int64_t end = std::min(count, begin + block);
    partial[static_cast<std::size_t>(b)] = fn(begin, end);
  }
  return pairwise_reduce(std::move(partial), identity, combine);
}

// Runs fn(begin, end) over fixed blocks with no cross-block reduction.
template <class Fn>
void blocked_for(std::int64_t count, std::int64_t block, const ParallelContext& ctx, Fn&& fn) {
  if (count <= 0) return;
  block = std::max<std::int64_t>(1, block);
  const std::int64_t nblocks = (count + block - 1) / block;
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, ctx.threads))
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t begin = b * block;
    fn(begin, std::min(count, begin + block));
  }
}

}  // namespace cubeq
