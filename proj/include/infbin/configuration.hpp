#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "infbin/errors.hpp"

namespace infbin {

// A configuration with finitely many balls. Bins are stored left to right and
// the last entry is bin 0, the rightmost bin. Every stored entry is a positive
// ball count, so an n-ball configuration has between 1 and n bins.
class Configuration {
 public:
  explicit Configuration(std::vector<std::uint64_t> bins);

  // Text format "[2,2,1]": bracketed, comma-separated positive integers,
  // leftmost bin first. Spaces around entries are tolerated on input.
  static Configuration parse(std::string_view text);

  const std::vector<std::uint64_t>& bins() const { return bins_; }
  std::uint64_t total() const { return total_; }
  std::size_t bin_count() const { return bins_.size(); }
  std::uint64_t rightmost() const { return bins_.back(); }

  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::uint64_t> bins_;
  std::uint64_t total_ = 0;
};

namespace detail {
// In-place move on a raw bin vector. Preconditions (not rechecked):
// bins nonempty, all entries positive, 1 <= k <= sum(bins).
void apply_move_raw(std::vector<std::uint64_t>& bins, std::uint64_t k);
}  // namespace detail

// Move of type k: add one ball to the bin immediately right of the bin holding
// the k-th ball counted from the right (a new rightmost bin when that ball is
// already in the rightmost bin), then delete one ball from the leftmost bin,
// dropping the bin if it empties. Throws MoveTooLarge when k > total.
Configuration apply_move(const Configuration& config, std::uint64_t k);

// Keeps the rightmost n balls, truncating the deepest kept bin as needed.
// Throws ProjectionTooLarge when n > total.
Configuration project(const Configuration& config, std::uint64_t n);

// An infinite configuration in constant-plus-window form: every bin deeper
// than the materialized window holds `base` balls. Moves never need the
// far-away bins, so the window only grows leftward when a move actually
// changes a bin that was still implicit. `shift` counts the rightmost bins
// created since construction, which is exactly the front displacement.
class LazyInfiniteConfiguration {
 public:
  explicit LazyInfiniteConfiguration(std::uint64_t base,
                                     std::vector<std::uint64_t> window = {});

  // Text format "base:2" or "base:2:[2,1]" (window leftmost first).
  static LazyInfiniteConfiguration parse(std::string_view text);

  std::uint64_t base() const { return base_; }
  const std::vector<std::uint64_t>& window() const { return window_; }
  std::uint64_t shift() const { return shift_; }

  // Ball count of bin -depth; depth 0 is the rightmost bin.
  std::uint64_t bin(std::uint64_t depth) const {
    return depth < window_.size() ? window_[window_.size() - 1 - depth] : base_;
  }

  // In-place move of type k; every k >= 1 is legal on an infinite
  // configuration. apply_move_infinite is the copying wrapper.
  void apply_move_inplace(std::uint64_t k);

  std::string to_string() const;

 private:
  std::uint64_t base_;
  std::vector<std::uint64_t> window_;  // leftmost first; last entry is bin 0
  std::uint64_t shift_ = 0;
};

LazyInfiniteConfiguration apply_move_infinite(const LazyInfiniteConfiguration& config,
                                              std::uint64_t k);

// n-ball projection; defined for every n >= 1.
Configuration project(const LazyInfiniteConfiguration& config, std::uint64_t n);

// Contents of the rightmost `depth` bins, leftmost first.
std::vector<std::uint64_t> top_bins(const LazyInfiniteConfiguration& config,
                                    std::uint64_t depth);

// Equivalent to project(a, n) == project(b, n) without building either.
bool equal_projection(const LazyInfiniteConfiguration& a,
                      const LazyInfiniteConfiguration& b, std::uint64_t n);

}  // namespace infbin
