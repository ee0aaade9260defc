#include "maternlab/parallel.hpp"

#include <atomic>
#include <exception>
#include <limits>

namespace maternlab {

namespace {
thread_local bool tl_in_job = false;
}

void SerialExecutor::parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

struct ThreadPool::Job {
  std::size_t n = 0;
  const std::function<void(std::size_t)>* body = nullptr;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
};

ThreadPool::ThreadPool(std::size_t threads) {
  const std::size_t extra = threads > 1 ? threads - 1 : 0;
  workers_.reserve(extra);
  for (std::size_t i = 0; i < extra; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

void ThreadPool::run_job(Job& job) {
  const bool outer = tl_in_job;
  tl_in_job = true;
  for (;;) {
    const std::size_t i = job.next.fetch_add(1);
    if (i >= job.n) {
      tl_in_job = outer;
      return;
    }
    try {
      (*job.body)(i);
    } catch (...) {
      std::lock_guard lock(job.error_mutex);
      if (i < job.error_index) {
        job.error_index = i;
        job.error = std::current_exception();
      }
    }
  }
}

void ThreadPool::worker_loop() {
  std::size_t seen = 0;
  for (;;) {
    Job* job = nullptr;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || (job_ != nullptr && generation_ != seen); });
      if (stop_) return;
      seen = generation_;
      job = job_;
      ++active_;
    }
    run_job(*job);
    {
      std::lock_guard lock(mutex_);
      --active_;
    }
    done_.notify_all();
  }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (workers_.empty() || n == 1) {
    SerialExecutor().parallel_for(n, body);
    return;
  }
  // Nested calls from inside a job run serially on the calling thread.
  if (tl_in_job) {
    SerialExecutor().parallel_for(n, body);
    return;
  }
  std::lock_guard submit(submit_mutex_);
  Job job;
  job.n = n;
  job.body = &body;
  {
    std::lock_guard lock(mutex_);
    job_ = &job;
    ++generation_;
  }
  wake_.notify_all();
  run_job(job);
  {
    std::unique_lock lock(mutex_);
    job_ = nullptr;
    done_.wait(lock, [&] { return active_ == 0; });
  }
  if (job.error) std::rethrow_exception(job.error);
}

Executor& serial_executor() {
  static SerialExecutor instance;
  return instance;
}

std::size_t hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

}  // namespace maternlab
