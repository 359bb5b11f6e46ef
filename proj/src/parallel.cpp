#include "ruthkit/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ruthkit {

int worker_count() {
  const char* v = std::getenv("RUTHKIT_WORKERS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n < 1 ? 1 : (n > 64 ? 64 : n);
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int w = worker_count();
  if (w <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  const int chunk = (n + w - 1) / w;
  for (int t = 0; t < w; ++t) {
    const int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace ruthkit
