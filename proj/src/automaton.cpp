#include "infbin/automaton.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <deque>
#include <limits>
#include <stdexcept>
#include <utility>

namespace infbin {

namespace {

std::string format_alphabet(const std::vector<std::uint64_t>& alphabet) {
  std::string out = "{";
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(alphabet[i]);
  }
  out += "}";
  return out;
}

}  // namespace

BinAutomaton::BinAutomaton(std::uint64_t l, std::vector<std::uint64_t> alphabet)
    : l_(l), alphabet_(std::move(alphabet)) {
  const std::uint64_t count = universe_size(l);
  state_count_ = static_cast<std::uint32_t>(count);
  if (alphabet_.empty()) throw InvalidParams("alphabet must be nonempty");
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
  for (std::uint64_t letter : alphabet_) {
    if (letter == 0) throw InvalidParams("move types must be positive");
    if (letter > l_)
      throw LetterTooLarge("letter " + std::to_string(letter) + " exceeds the ball count " +
                           std::to_string(l_));
  }
  delta_.resize(static_cast<std::size_t>(state_count_) * alphabet_.size());
  for (std::uint32_t state = 0; state < state_count_; ++state) {
    const Configuration config = composition_from_mask(l_, state);
    for (std::size_t a = 0; a < alphabet_.size(); ++a) {
      std::vector<std::uint64_t> bins = config.bins();
      detail::apply_move_raw(bins, alphabet_[a]);
      delta_[static_cast<std::size_t>(state) * alphabet_.size() + a] =
          static_cast<std::uint32_t>(mask_from_composition(Configuration(std::move(bins))));
    }
  }
}

SyncResult shortest_sync_exact(std::uint64_t l, std::vector<std::uint64_t> alphabet,
                               std::uint64_t max_subsets) {
  const std::uint64_t count = universe_size(l);
  if (count > 31 || (std::uint64_t{1} << count) > max_subsets)
    throw SubsetSpaceTooLarge("subset search over " + std::to_string(count) +
                              " states needs 2^" + std::to_string(count) +
                              " subsets, cap is " + std::to_string(max_subsets));
  BinAutomaton aut(l, std::move(alphabet));
  const std::uint32_t sc = aut.state_count();
  const std::size_t num_letters = aut.alphabet().size();
  const std::uint64_t space = std::uint64_t{1} << sc;
  const std::uint64_t full = space - 1;

  SyncResult result;
  result.l = l;
  result.alphabet = aut.alphabet();
  result.method = "exact";
  result.optimal = true;
  if (sc == 1) {
    result.terminal = aut.state_config(0);
    return result;
  }

  constexpr std::uint8_t kUnvisited = 0xff;
  constexpr std::uint8_t kStart = 0xfe;
  std::vector<std::uint32_t> parent(space, 0);
  std::vector<std::uint8_t> via(space, kUnvisited);
  std::deque<std::uint32_t> queue;
  via[full] = kStart;
  queue.push_back(static_cast<std::uint32_t>(full));

  auto reconstruct = [&](std::uint64_t subset) {
    std::vector<std::size_t> letters;
    while (via[subset] != kStart) {
      letters.push_back(via[subset]);
      subset = parent[subset];
    }
    std::reverse(letters.begin(), letters.end());
    for (std::size_t a : letters) result.word.append_run(aut.alphabet()[a]);
  };

  while (!queue.empty()) {
    const std::uint64_t subset = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < num_letters; ++a) {
      std::uint64_t image = 0;
      std::uint64_t rest = subset;
      while (rest) {
        const int state = std::countr_zero(rest);
        rest &= rest - 1;
        image |= std::uint64_t{1} << aut.next(static_cast<std::uint32_t>(state), a);
      }
      if (via[image] != kUnvisited) continue;
      via[image] = static_cast<std::uint8_t>(a);
      parent[image] = static_cast<std::uint32_t>(subset);
      if (std::popcount(image) == 1) {
        reconstruct(image);
        result.terminal = aut.state_config(static_cast<std::uint32_t>(std::countr_zero(image)));
        return result;
      }
      queue.push_back(static_cast<std::uint32_t>(image));
    }
  }
  throw NotSynchronizable("no word over " + format_alphabet(aut.alphabet()) +
                          " synchronizes the " + std::to_string(l) + "-ball configurations");
}

SyncResult greedy_sync(std::uint64_t l, std::vector<std::uint64_t> alphabet,
                       std::uint32_t max_states) {
  const std::uint64_t count = universe_size(l);
  if (count > max_states)
    throw SubsetSpaceTooLarge("pair merging over " + std::to_string(count) +
                              " states exceeds the cap of " + std::to_string(max_states));
  BinAutomaton aut(l, std::move(alphabet));
  const std::uint32_t sc = aut.state_count();
  const std::size_t num_letters = aut.alphabet().size();

  SyncResult result;
  result.l = l;
  result.alphabet = aut.alphabet();
  result.method = "greedy";
  if (sc == 1) {
    result.terminal = aut.state_config(0);
    result.optimal = true;
    return result;
  }

  // unordered pairs p <= q, diagonal included: id = q(q+1)/2 + p
  auto pid = [](std::uint32_t p, std::uint32_t q) {
    if (p > q) std::swap(p, q);
    return static_cast<std::size_t>(q) * (q + 1) / 2 + p;
  };
  const std::size_t n_pairs = pid(sc - 1, sc - 1) + 1;
  const std::size_t n_edges = n_pairs * num_letters;

  std::vector<std::uint32_t> image(n_edges);
  for (std::uint32_t q = 0; q < sc; ++q)
    for (std::uint32_t p = 0; p <= q; ++p) {
      const std::size_t base = pid(p, q) * num_letters;
      for (std::size_t a = 0; a < num_letters; ++a)
        image[base + a] = static_cast<std::uint32_t>(pid(aut.next(p, a), aut.next(q, a)));
    }

  // backward breadth-first search from the diagonal over reversed pair edges
  std::vector<std::uint32_t> offsets(n_pairs + 1, 0);
  for (std::uint32_t target : image) ++offsets[target + 1];
  for (std::size_t i = 0; i < n_pairs; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::uint32_t> rev(n_edges);
  {
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t e = 0; e < n_edges; ++e)
      rev[cursor[image[e]]++] = static_cast<std::uint32_t>(e / num_letters);
  }
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(n_pairs, kInf);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s = 0; s < sc; ++s) {
    dist[pid(s, s)] = 0;
    queue.push_back(static_cast<std::uint32_t>(pid(s, s)));
  }
  while (!queue.empty()) {
    const std::uint32_t pair = queue.front();
    queue.pop_front();
    for (std::uint32_t e = offsets[pair]; e < offsets[pair + 1]; ++e) {
      const std::uint32_t pred = rev[e];
      if (dist[pred] != kInf) continue;
      dist[pred] = dist[pair] + 1;
      queue.push_back(pred);
    }
  }

  std::vector<std::uint32_t> current(sc);
  for (std::uint32_t s = 0; s < sc; ++s) current[s] = s;
  while (current.size() > 1) {
    std::uint32_t best_p = 0, best_q = 0, best = kInf;
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        const std::uint32_t d = dist[pid(current[i], current[j])];
        if (d < best) {
          best = d;
          best_p = current[i];
          best_q = current[j];
        }
      }
    if (best == kInf)
      throw NotSynchronizable("no word over " + format_alphabet(aut.alphabet()) +
                              " synchronizes the " + std::to_string(l) +
                              "-ball configurations");
    std::uint32_t p = best_p, q = best_q;
    while (p != q) {
      const std::uint32_t d = dist[pid(p, q)];
      std::size_t chosen = num_letters;
      for (std::size_t a = 0; a < num_letters; ++a)
        if (dist[pid(aut.next(p, a), aut.next(q, a))] + 1 == d) {
          chosen = a;
          break;
        }
      if (chosen == num_letters)
        throw std::logic_error("pair distance table is inconsistent");
      result.word.append_run(aut.alphabet()[chosen]);
      for (std::uint32_t& s : current) s = aut.next(s, chosen);
      p = aut.next(p, chosen);
      q = aut.next(q, chosen);
    }
    std::sort(current.begin(), current.end());
    current.erase(std::unique(current.begin(), current.end()), current.end());
  }
  result.terminal = aut.state_config(current.front());
  result.optimal = result.word.empty();
  return result;
}

std::optional<Configuration> synchronizes_to(std::uint64_t l, const MoveWord& word,
                                             unsigned threads) {
  if (!word.empty() && word.max_type() > l)
    throw LetterTooLarge("letter " + std::to_string(word.max_type()) +
                         " exceeds the ball count " + std::to_string(l));
  const Configuration ref = apply_word(composition_from_mask(l, 0), word);
  auto failure = sweep_compositions(
      l, threads,
      [&](std::uint64_t, const Configuration& x) -> std::optional<std::string> {
        if (apply_word(x, word) != ref) return "diverges";
        return std::nullopt;
      });
  if (failure) return std::nullopt;
  return ref;
}

void to_json(nlohmann::ordered_json& j, const SyncResult& result) {
  j = nlohmann::ordered_json{
      {"l", result.l},           {"alphabet", result.alphabet},
      {"method", result.method}, {"word", result.word.to_string()},
      {"length", result.word.length()}, {"terminal", result.terminal.to_string()},
      {"optimal", result.optimal},
  };
}

}  // namespace infbin
