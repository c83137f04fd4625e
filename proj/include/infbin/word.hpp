#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "infbin/configuration.hpp"

namespace infbin {

// A finite sequence of moves, stored run-length encoded. The first run is
// applied first. Note that this is the reverse of function-composition
// notation: a composed map "phi_5^3 phi_2" applies phi_2 first and therefore
// serializes here as "2 5^3". Runs are kept canonical (adjacent runs never
// share a move type), so equality of MoveWord values is equality of the
// underlying move sequences.
class MoveWord {
 public:
  struct Run {
    std::uint64_t type = 0;
    std::uint64_t repeat = 0;
    friend bool operator==(const Run&, const Run&) = default;
  };

  MoveWord() = default;  // the empty word

  // Grammar: word := term (" " term)* ; term := INT ("^" INT)?
  // "5^3" means move type 5, three times. Types and repeats are positive.
  static MoveWord parse(std::string_view text);

  void append_run(std::uint64_t type, std::uint64_t repeat = 1);
  void append_word(const MoveWord& other);

  const std::vector<Run>& runs() const { return runs_; }
  std::uint64_t length() const { return length_; }
  bool empty() const { return runs_.empty(); }
  std::uint64_t max_type() const;

  // Fully expanded move sequence; throws past the cap to keep accidental
  // huge words from exhausting memory.
  std::vector<std::uint64_t> expanded(std::uint64_t cap = 1'000'000) const;

  // Canonical text: repeats of one print bare ("2"), others as "5^3".
  std::string to_string() const;

  friend bool operator==(const MoveWord&, const MoveWord&) = default;

 private:
  std::vector<Run> runs_;
  std::uint64_t length_ = 0;
};

// Folds apply_move over the word, first run first. The ball count is
// invariant under moves, so a single upfront check (max type <= total)
// covers the whole fold; throws MoveTooLarge otherwise.
Configuration apply_word(const Configuration& config, const MoveWord& word);

LazyInfiniteConfiguration apply_word(const LazyInfiniteConfiguration& config,
                                     const MoveWord& word);

}  // namespace infbin
