#pragma once

#include <cstddef>
#include <functional>

namespace uniharm {

/// Number of workers used by parallel_for. An explicit set_worker_count(n > 0)
/// wins; otherwise UNIHARM_THREADS is read (0 or unset = hardware
/// concurrency).
int worker_count();

/// 0 restores the environment/auto default.
void set_worker_count(int n);

/// Runs body(begin, end) over a static contiguous partition of [0, n).
/// Callers write results into per-index slots and reduce afterwards, so the
/// outcome never depends on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// RAII override of the worker count.
class ScopedWorkerCount {
 public:
  explicit ScopedWorkerCount(int n);
  ~ScopedWorkerCount();
  ScopedWorkerCount(const ScopedWorkerCount&) = delete;
  ScopedWorkerCount& operator=(const ScopedWorkerCount&) = delete;

 private:
  int previous_;
};

}  // namespace uniharm
