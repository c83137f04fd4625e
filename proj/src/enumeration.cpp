#include "infbin/enumeration.hpp"

#include <atomic>
#include <limits>
#include <mutex>

#include "infbin/parallel.hpp"

namespace infbin {

std::uint64_t universe_size(std::uint64_t l) {
  if (l == 0) throw InvalidParams("ball count must be positive");
  if (l > kMaxEnumerationL)
    throw UniverseTooLarge("enumeration of " + std::to_string(l) +
                           "-ball configurations exceeds the cap l <= " +
                           std::to_string(kMaxEnumerationL));
  return std::uint64_t{1} << (l - 1);
}

Configuration composition_from_mask(std::uint64_t l, std::uint64_t mask) {
  if (mask >= universe_size(l)) throw IndexOutOfRange("composition mask out of range");
  std::vector<std::uint64_t> bins;
  std::uint64_t run = 0;
  for (std::uint64_t ball = 1; ball <= l; ++ball) {
    ++run;
    if (ball == l || ((mask >> (ball - 1)) & 1)) {
      bins.push_back(run);
      run = 0;
    }
  }
  return Configuration(std::move(bins));
}

std::uint64_t mask_from_composition(const Configuration& config) {
  universe_size(config.total());  // enforce the cap
  std::uint64_t mask = 0;
  std::uint64_t cum = 0;
  const auto& bins = config.bins();
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    cum += bins[i];
    mask |= std::uint64_t{1} << (cum - 1);
  }
  return mask;
}

void for_each_composition(std::uint64_t l,
                          const std::function<void(std::uint64_t, const Configuration&)>& fn) {
  const std::uint64_t n = universe_size(l);
  for (std::uint64_t mask = 0; mask < n; ++mask) fn(mask, composition_from_mask(l, mask));
}

std::optional<SweepFailure> sweep_compositions(
    std::uint64_t l, unsigned threads,
    const std::function<std::optional<std::string>(std::uint64_t, const Configuration&)>& check) {
  const std::uint64_t n = universe_size(l);
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  std::mutex mu;
  std::string best_details;

  parallel_chunks(0, n, resolve_threads(threads), [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      // a failure at a smaller mask already wins; stop early
      if (mask >= best.load(std::memory_order_relaxed)) return;
      std::optional<std::string> bad = check(mask, composition_from_mask(l, mask));
      if (!bad) continue;
      std::lock_guard<std::mutex> lock(mu);
      if (mask < best.load(std::memory_order_relaxed)) {
        best.store(mask, std::memory_order_relaxed);
        best_details = std::move(*bad);
      }
    }
  });

  if (best.load() == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return SweepFailure{best.load(), best_details};
}

}  // namespace infbin
