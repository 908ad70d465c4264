#include "pqe/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace pqe {

unsigned effective_jobs(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_for(unsigned jobs, std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  jobs = effective_jobs(jobs);
  std::size_t workers = std::min<std::size_t>(jobs, n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::size_t per = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) {
    std::size_t b = t * per;
    std::size_t e = std::min(n, b + per);
    if (b >= e) break;
    threads.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(0, std::min(n, per));
  for (auto& th : threads) th.join();
}

}  // namespace pqe
