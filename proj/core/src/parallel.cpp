#include "ising/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ising {

int thread_count() {
  if (const char* env = std::getenv("ISING_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for_blocks(int64_t n, int64_t block_size,
                         const std::function<void(int64_t, int64_t)>& fn) {
  if (n <= 0) return;
  if (block_size <= 0) throw std::invalid_argument("block_size must be > 0");
  int64_t blocks = (n + block_size - 1) / block_size;
  int workers = thread_count();
  if (workers <= 1 || blocks == 1) {
    for (int64_t b = 0; b < blocks; ++b)
      fn(b * block_size, std::min(n, (b + 1) * block_size));
    return;
  }
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      int64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      fn(b * block_size, std::min(n, (b + 1) * block_size));
    }
  };
  std::vector<std::thread> pool;
  int nt = static_cast<int>(std::min<int64_t>(workers, blocks));
  pool.reserve(static_cast<size_t>(nt - 1));
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace ising
