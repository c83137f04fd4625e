#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "infbin/configuration.hpp"

namespace infbin {

// All l-ball configurations are the compositions of l into positive parts,
// one per bitmask over the l-1 gaps between consecutive balls: bit i set
// cuts between ball i+1 and ball i+2, counting balls left to right. Mask 0
// is [l], the all-ones mask is [1,1,...,1]. Everything below visits masks
// in ascending order, so counterexamples are stable across runs and thread
// counts.

inline constexpr std::uint64_t kMaxEnumerationL = 24;

// 2^(l-1); throws UniverseTooLarge past the cap.
std::uint64_t universe_size(std::uint64_t l);

Configuration composition_from_mask(std::uint64_t l, std::uint64_t mask);
std::uint64_t mask_from_composition(const Configuration& config);

void for_each_composition(std::uint64_t l,
                          const std::function<void(std::uint64_t, const Configuration&)>& fn);

struct SweepFailure {
  std::uint64_t mask = 0;
  std::string details;
};

// Runs `check` over every composition, chunked across threads; a returned
// string is a failure. Reports the failure with the smallest mask.
std::optional<SweepFailure> sweep_compositions(
    std::uint64_t l, unsigned threads,
    const std::function<std::optional<std::string>(std::uint64_t, const Configuration&)>& check);

}  // namespace infbin
