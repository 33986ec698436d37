#include "fracground/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace fracground {

namespace {

std::atomic<int> cap_override{0};

int env_cap() {
  if (const char* env = std::getenv("FRACGROUND_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

constexpr std::size_t kDeterministicBlocks = 64;

}  // namespace

int thread_cap() {
  const int o = cap_override.load();
  return o > 0 ? o : env_cap();
}

void set_thread_cap(int threads) { cap_override.store(std::max(0, threads)); }

double parallel_sum(std::size_t count,
                    const std::function<double(std::size_t, std::size_t)>& body,
                    Reduction mode) {
  if (count == 0) return 0.0;
  const std::size_t workers = static_cast<std::size_t>(thread_cap());
  const std::size_t blocks = mode == Reduction::deterministic
                                 ? std::min(kDeterministicBlocks, count)
                                 : std::min(workers, count);
  std::vector<double> partial(blocks, 0.0);
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = count * b / blocks;
    const std::size_t end = count * (b + 1) / blocks;
    partial[b] = body(begin, end);
  };

  const std::size_t nthreads = std::min(workers, blocks);
  if (nthreads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
      });
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace fracground
