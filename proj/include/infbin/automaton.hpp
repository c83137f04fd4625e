#pragma once

// Finite automaton induced on configurations with a fixed ball count l:
// states are the 2^(l-1) compositions of l, letters are move types.
// A synchronizing word drives every state to one common configuration.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "infbin/configuration.hpp"
#include "infbin/enumeration.hpp"
#include "infbin/errors.hpp"
#include "infbin/word.hpp"

namespace infbin {

class BinAutomaton {
 public:
  // alphabet letters are move types; each must lie in [1, l]
  BinAutomaton(std::uint64_t l, std::vector<std::uint64_t> alphabet);

  std::uint64_t l() const { return l_; }
  const std::vector<std::uint64_t>& alphabet() const { return alphabet_; }
  std::uint32_t state_count() const { return state_count_; }

  // next state for (state mask, index into alphabet())
  std::uint32_t next(std::uint32_t state, std::size_t letter_index) const {
    return delta_[static_cast<std::size_t>(state) * alphabet_.size() + letter_index];
  }

  Configuration state_config(std::uint32_t state) const {
    return composition_from_mask(l_, state);
  }

 private:
  std::uint64_t l_;
  std::vector<std::uint64_t> alphabet_;
  std::uint32_t state_count_;
  std::vector<std::uint32_t> delta_;
};

struct SyncResult {
  std::uint64_t l = 0;
  std::vector<std::uint64_t> alphabet;
  std::string method;  // "exact" or "greedy"
  MoveWord word;
  Configuration terminal{std::vector<std::uint64_t>{1}};
  bool optimal = false;
};

// Shortest synchronizing word by breadth-first search over subsets of states,
// expanding letters in ascending order so ties resolve to the lexicographically
// smallest word. Throws SubsetSpaceTooLarge when 2^state_count exceeds the cap
// and NotSynchronizable when no word exists.
SyncResult shortest_sync_exact(std::uint64_t l, std::vector<std::uint64_t> alphabet,
                               std::uint64_t max_subsets = std::uint64_t{1} << 22);

// Synchronizing word by repeated pair merging (not necessarily shortest).
// Works up to 2048 states (l <= 12); throws SubsetSpaceTooLarge beyond that.
SyncResult greedy_sync(std::uint64_t l, std::vector<std::uint64_t> alphabet,
                       std::uint32_t max_states = 2048);

// common image of every l-ball configuration under the word, if one exists
std::optional<Configuration> synchronizes_to(std::uint64_t l, const MoveWord& word,
                                             unsigned threads = 1);

void to_json(nlohmann::ordered_json& j, const SyncResult& result);

}  // namespace infbin
