#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace pgm {

/// Resolves a requested worker count; 0 means "all hardware threads".
std::size_t resolve_workers(std::size_t requested) noexcept;

/// A persistent pool of workers executing index-addressed tasks.
///
/// Tasks are claimed dynamically from a shared counter, so uneven task costs
/// balance across workers. Results must be written to per-task slots; callers
/// combine them in index order, which keeps every computation independent of
/// the worker count and of the schedule.
///
/// A call made from inside a running task executes inline and serially. If
/// tasks throw, the exception of the lowest-indexed failing task is rethrown,
/// which is the same exception a serial run would raise.
class Executor {
 public:
  explicit Executor(std::size_t workers = 1);
  ~Executor();

  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  std::size_t workers() const noexcept { return workers_; }

  void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task) const;

  /// True when the calling thread is currently running a task of any executor.
  static bool in_parallel_region() noexcept;

 private:
  struct Pool;
  std::size_t workers_;
  std::unique_ptr<Pool> pool_;
};

/// Process-wide single-worker executor used as the default argument.
const Executor& serial_executor();

/// Splits [0, n) into fixed-size blocks; the partition depends only on n and
/// block, never on the worker count.
struct BlockRange {
  std::size_t begin;
  std::size_t end;
};

inline std::size_t block_count(std::size_t n, std::size_t block) {
  return block == 0 ? 0 : (n + block - 1) / block;
}

inline BlockRange block_range(std::size_t n, std::size_t block, std::size_t index) {
  const std::size_t begin = index * block;
  const std::size_t end = begin + block < n ? begin + block : n;
  return {begin, end};
}

/// Deterministic map-reduce: each fixed block produces a partial result in
/// parallel; partials are folded left to right in block order.
template <class T, class MapBlock, class Fold>
T deterministic_reduce(const Executor& exec, std::size_t n, std::size_t block, T init,
                       MapBlock map_block, Fold fold) {
  const std::size_t n_blocks = block_count(n, block);
  std::vector<T> partials(n_blocks);
  exec.parallel_for(n_blocks, [&](std::size_t b) {
    partials[b] = map_block(block_range(n, block, b));
  });
  for (auto& p : partials) init = fold(std::move(init), std::move(p));
  return init;
}

}  // namespace pgm
