#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace maternlab {

/// Parallel-map capability handed to library code. Implementations run
/// body(i) for every i in [0, n) and return once all calls have finished.
/// Results must be written to per-index slots so that output never depends
/// on scheduling. The first exception (lowest index) is rethrown.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual std::size_t concurrency() const = 0;
  virtual void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) = 0;
};

class SerialExecutor final : public Executor {
 public:
  std::size_t concurrency() const override { return 1; }
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) override;
};

/// Fixed-size worker pool; the calling thread also takes work.
class ThreadPool final : public Executor {
 public:
  explicit ThreadPool(std::size_t threads);
  ~ThreadPool() override;
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t concurrency() const override { return workers_.size() + 1; }
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) override;

 private:
  struct Job;
  void worker_loop();
  static void run_job(Job& job);

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  Job* job_ = nullptr;
  std::size_t generation_ = 0;
  std::size_t active_ = 0;
  bool stop_ = false;
  std::mutex submit_mutex_;
};

/// Shared serial executor used when callers pass none.
Executor& serial_executor();

/// Threads available on this machine (at least 1).
std::size_t hardware_threads();

}  // namespace maternlab
