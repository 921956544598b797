#pragma once

// Deterministic chunked parallelism. Work is cut into chunks whose size does
// not depend on the worker count; per-chunk results are combined in chunk
// order, so sums are bit-identical for any number of threads.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace renorm {

/// RENORM_WORKERS if set, else the hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("RENORM_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_count(unsigned n);
unsigned worker_count();

/// Runs fn(chunk_index, begin, end) for every chunk of [0, n); returns the
/// per-chunk results in chunk order.
template <class R, class Fn>
std::vector<R> parallel_chunks(std::size_t n, std::size_t chunk, Fn fn) {
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<R> out(chunks);
  const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(chunks, 1));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= chunks) return;
        try {
          out[c] = fn(c, c * chunk, std::min(n, (c + 1) * chunk));
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          next = chunks;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for sample `index` under `seed`.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

inline constexpr std::uint64_t kDefaultSeed = 20240611ULL;

}  // namespace renorm
