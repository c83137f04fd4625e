#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace infbin {

// Effective worker count. requested == 0 falls back to the INFBIN_THREADS
// environment variable, then to the hardware concurrency.
unsigned resolve_threads(unsigned requested);

// Runs fn(chunk_begin, chunk_end) over [begin, end) split into contiguous
// chunks, one per worker. fn must be safe to run concurrently on disjoint
// ranges. With threads <= 1 (or a tiny range) everything runs inline.
template <class Fn>
void parallel_chunks(std::uint64_t begin, std::uint64_t end, unsigned threads, Fn&& fn) {
  const std::uint64_t span = end > begin ? end - begin : 0;
  if (threads <= 1 || span < 2 * threads) {
    if (span > 0) fn(begin, end);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::uint64_t chunk = (span + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = begin + chunk * t;
    if (lo >= end) break;
    const std::uint64_t hi = lo + chunk < end ? lo + chunk : end;
    workers.emplace_back([lo, hi, &fn] { fn(lo, hi); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace infbin
