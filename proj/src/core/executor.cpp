#include "pgm/core/executor.hpp"

#include <atomic>
#include <condition_variable>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace pgm {

namespace {

thread_local int tl_region_depth = 0;

struct RegionGuard {
  RegionGuard() { ++tl_region_depth; }
  ~RegionGuard() { --tl_region_depth; }
};

}  // namespace

std::size_t resolve_workers(std::size_t requested) noexcept {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct Executor::Pool {
  std::mutex run_mutex;

  std::mutex m;
  std::condition_variable wake;
  std::condition_variable idle;
  std::uint64_t generation = 0;
  bool open = false;
  bool shutdown = false;
  std::size_t busy = 0;

  const std::function<void(std::size_t)>* task = nullptr;
  std::size_t n_tasks = 0;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  std::vector<std::thread> threads;

  void claim_loop() {
    RegionGuard guard;
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_tasks) break;
      try {
        (*task)(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  }

  void worker_main() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(m);
        wake.wait(lock, [&] { return shutdown || generation != seen; });
        if (shutdown) return;
        seen = generation;
        if (!open) continue;
        ++busy;
      }
      claim_loop();
      {
        std::lock_guard lock(m);
        --busy;
      }
      idle.notify_all();
    }
  }
};

Executor::Executor(std::size_t workers) : workers_(resolve_workers(workers)) {
  if (workers_ > 1) {
    pool_ = std::make_unique<Pool>();
    pool_->threads.reserve(workers_ - 1);
    for (std::size_t i = 0; i + 1 < workers_; ++i) {
      pool_->threads.emplace_back([p = pool_.get()] { p->worker_main(); });
    }
  }
}

Executor::~Executor() {
  if (!pool_) return;
  {
    std::lock_guard lock(pool_->m);
    pool_->shutdown = true;
  }
  pool_->wake.notify_all();
  for (auto& t : pool_->threads) t.join();
}

bool Executor::in_parallel_region() noexcept { return tl_region_depth > 0; }

void Executor::parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task) const {
  if (n_tasks == 0) return;
  if (!pool_ || n_tasks == 1 || in_parallel_region()) {
    RegionGuard guard;
    for (std::size_t i = 0; i < n_tasks; ++i) task(i);
    return;
  }

  Pool& p = *pool_;
  std::lock_guard run_lock(p.run_mutex);
  {
    std::lock_guard lock(p.m);
    p.task = &task;
    p.n_tasks = n_tasks;
    p.next.store(0, std::memory_order_relaxed);
    p.failed.store(false, std::memory_order_relaxed);
    p.error_index = std::numeric_limits<std::size_t>::max();
    p.error = nullptr;
    p.open = true;
    ++p.generation;
  }
  p.wake.notify_all();
  p.claim_loop();
  {
    std::unique_lock lock(p.m);
    p.open = false;
    p.idle.wait(lock, [&] { return p.busy == 0; });
    p.task = nullptr;
  }
  if (p.error) std::rethrow_exception(p.error);
}

const Executor& serial_executor() {
  static const Executor exec(1);
  return exec;
}

}  // namespace pgm
