#include "felab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace felab {

namespace {

int initial_budget() {
  if (const char* env = std::getenv("FELAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::atomic<int>& budget() {
  static std::atomic<int> b{initial_budget()};
  return b;
}

thread_local bool inside_worker = false;

}  // namespace

int thread_budget() { return budget().load(); }

void set_thread_budget(int threads) { budget().store(threads > 0 ? threads : initial_budget()); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int threads = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(thread_budget())));
  // Nested calls run inline so the total never exceeds the budget.
  if (threads <= 1 || inside_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    inside_worker = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    inside_worker = false;
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace felab
