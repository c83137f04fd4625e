#include "infbin/word.hpp"

#include <algorithm>
#include <charconv>

namespace infbin {

namespace {

std::uint64_t parse_term_uint(std::string_view text, std::size_t& pos) {
  std::uint64_t value = 0;
  const char* first = text.data() + pos;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) throw ParseError("expected an integer in word");
  pos = static_cast<std::size_t>(ptr - text.data());
  return value;
}

}  // namespace

MoveWord MoveWord::parse(std::string_view text) {
  MoveWord word;
  std::size_t pos = 0;
  bool any = false;
  while (pos < text.size()) {
    if (text[pos] == ' ') {
      ++pos;
      continue;
    }
    std::uint64_t type = parse_term_uint(text, pos);
    if (type == 0) throw ParseError("move types must be positive");
    std::uint64_t repeat = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      repeat = parse_term_uint(text, pos);
      if (repeat == 0) throw ParseError("repeat counts must be positive");
    }
    if (pos < text.size() && text[pos] != ' ')
      throw ParseError("unexpected character in word");
    word.append_run(type, repeat);
    any = true;
  }
  if (!any) throw ParseError("empty word");
  return word;
}

void MoveWord::append_run(std::uint64_t type, std::uint64_t repeat) {
  if (type == 0) throw InvalidParams("move types must be positive");
  if (repeat == 0) return;
  if (!runs_.empty() && runs_.back().type == type)
    runs_.back().repeat += repeat;
  else
    runs_.push_back({type, repeat});
  length_ += repeat;
}

void MoveWord::append_word(const MoveWord& other) {
  for (const Run& run : other.runs_) append_run(run.type, run.repeat);
}

std::uint64_t MoveWord::max_type() const {
  std::uint64_t m = 0;
  for (const Run& run : runs_) m = std::max(m, run.type);
  return m;
}

std::vector<std::uint64_t> MoveWord::expanded(std::uint64_t cap) const {
  if (length_ > cap)
    throw ResourceCapError("word of length " + std::to_string(length_) +
                           " exceeds the expansion cap");
  std::vector<std::uint64_t> moves;
  moves.reserve(length_);
  for (const Run& run : runs_)
    moves.insert(moves.end(), run.repeat, run.type);
  return moves;
}

std::string MoveWord::to_string() const {
  std::string out;
  for (const Run& run : runs_) {
    if (!out.empty()) out += ' ';
    out += std::to_string(run.type);
    if (run.repeat > 1) {
      out += '^';
      out += std::to_string(run.repeat);
    }
  }
  return out;
}

Configuration apply_word(const Configuration& config, const MoveWord& word) {
  if (word.max_type() > config.total())
    throw MoveTooLarge("word uses move type " + std::to_string(word.max_type()) +
                       " on a configuration of " + std::to_string(config.total()) +
                       " balls");
  std::vector<std::uint64_t> bins = config.bins();
  for (const MoveWord::Run& run : word.runs())
    for (std::uint64_t i = 0; i < run.repeat; ++i)
      detail::apply_move_raw(bins, run.type);
  return Configuration(std::move(bins));
}

LazyInfiniteConfiguration apply_word(const LazyInfiniteConfiguration& config,
                                     const MoveWord& word) {
  LazyInfiniteConfiguration out = config;
  for (const MoveWord::Run& run : word.runs())
    for (std::uint64_t i = 0; i < run.repeat; ++i)
      out.apply_move_inplace(run.type);
  return out;
}

}  // namespace infbin
