#include "infbin/configuration.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace infbin {

namespace {

void skip_spaces(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && text[pos] == ' ') ++pos;
}

std::uint64_t parse_uint(std::string_view text, std::size_t& pos, const char* what) {
  skip_spaces(text, pos);
  std::uint64_t value = 0;
  const char* first = text.data() + pos;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first)
    throw ParseError(std::string("expected ") + what);
  pos = static_cast<std::size_t>(ptr - text.data());
  return value;
}

std::vector<std::uint64_t> parse_bin_list(std::string_view text, std::size_t& pos) {
  skip_spaces(text, pos);
  if (pos >= text.size() || text[pos] != '[')
    throw ParseError("configuration must start with '['");
  ++pos;
  std::vector<std::uint64_t> bins;
  for (;;) {
    std::uint64_t b = parse_uint(text, pos, "a bin count");
    if (b == 0) throw ParseError("bin counts must be positive");
    bins.push_back(b);
    skip_spaces(text, pos);
    if (pos >= text.size()) throw ParseError("unterminated configuration");
    if (text[pos] == ',') {
      ++pos;
      continue;
    }
    if (text[pos] == ']') {
      ++pos;
      break;
    }
    throw ParseError("expected ',' or ']' in configuration");
  }
  return bins;
}

}  // namespace

Configuration::Configuration(std::vector<std::uint64_t> bins) : bins_(std::move(bins)) {
  if (bins_.empty()) throw InvalidParams("a configuration needs at least one bin");
  for (std::uint64_t b : bins_)
    if (b == 0) throw InvalidParams("bin counts must be positive");
  total_ = std::accumulate(bins_.begin(), bins_.end(), std::uint64_t{0});
}

Configuration Configuration::parse(std::string_view text) {
  std::size_t pos = 0;
  std::vector<std::uint64_t> bins = parse_bin_list(text, pos);
  skip_spaces(text, pos);
  if (pos != text.size()) throw ParseError("trailing characters after configuration");
  return Configuration(std::move(bins));
}

std::string Configuration::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(bins_[i]);
  }
  out += ']';
  return out;
}

namespace detail {

void apply_move_raw(std::vector<std::uint64_t>& bins, std::uint64_t k) {
  // locate the bin of the k-th ball from the right
  std::size_t idx = bins.size();
  std::uint64_t cum = 0;
  while (cum < k) {
    --idx;
    cum += bins[idx];
  }
  if (idx + 1 == bins.size())
    bins.push_back(1);
  else
    ++bins[idx + 1];
  if (--bins.front() == 0) bins.erase(bins.begin());
}

}  // namespace detail

Configuration apply_move(const Configuration& config, std::uint64_t k) {
  if (k == 0) throw InvalidParams("move type must be positive");
  if (k > config.total())
    throw MoveTooLarge("move of type " + std::to_string(k) + " needs at least " +
                       std::to_string(k) + " balls, configuration has " +
                       std::to_string(config.total()));
  std::vector<std::uint64_t> bins = config.bins();
  detail::apply_move_raw(bins, k);
  return Configuration(std::move(bins));
}

Configuration project(const Configuration& config, std::uint64_t n) {
  if (n == 0) throw InvalidParams("projection size must be positive");
  if (n > config.total())
    throw ProjectionTooLarge("cannot keep " + std::to_string(n) + " balls of " +
                             std::to_string(config.total()));
  const auto& bins = config.bins();
  std::vector<std::uint64_t> kept;
  std::uint64_t cum = 0;
  std::size_t idx = bins.size();
  while (cum < n) {
    --idx;
    std::uint64_t take = std::min(bins[idx], n - cum);
    kept.push_back(take);
    cum += take;
  }
  std::reverse(kept.begin(), kept.end());
  return Configuration(std::move(kept));
}

LazyInfiniteConfiguration::LazyInfiniteConfiguration(std::uint64_t base,
                                                     std::vector<std::uint64_t> window)
    : base_(base), window_(std::move(window)) {
  if (base_ == 0) throw InvalidParams("base fill must be positive");
  for (std::uint64_t b : window_)
    if (b == 0) throw InvalidParams("window bins must be positive");
}

LazyInfiniteConfiguration LazyInfiniteConfiguration::parse(std::string_view text) {
  if (text.substr(0, 5) != "base:")
    throw ParseError("infinite configuration must start with \"base:\"");
  std::size_t pos = 5;
  std::uint64_t base = 0;
  {
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, base);
    if (ec != std::errc{} || ptr == first) throw ParseError("expected a base fill");
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  std::vector<std::uint64_t> window;
  if (pos < text.size()) {
    if (text[pos] != ':') throw ParseError("expected ':' before the window");
    ++pos;
    window = parse_bin_list(text, pos);
    if (pos != text.size()) throw ParseError("trailing characters after window");
  }
  return LazyInfiniteConfiguration(base, std::move(window));
}

void LazyInfiniteConfiguration::apply_move_inplace(std::uint64_t k) {
  if (k == 0) throw InvalidParams("move type must be positive");
  std::uint64_t cum = 0;
  std::uint64_t depth = 0;
  for (;; ++depth) {
    cum += bin(depth);
    if (cum >= k) break;
  }
  if (depth == 0) {
    // the k-th ball is already rightmost: open a new rightmost bin
    window_.push_back(1);
    ++shift_;
    return;
  }
  const std::uint64_t target = depth - 1;
  if (target >= window_.size())
    window_.insert(window_.begin(), target + 1 - window_.size(), base_);
  window_[window_.size() - 1 - target] += 1;
}

std::string LazyInfiniteConfiguration::to_string() const {
  std::string out = "base:" + std::to_string(base_);
  if (!window_.empty()) {
    out += ":[";
    for (std::size_t i = 0; i < window_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(window_[i]);
    }
    out += ']';
  }
  return out;
}

LazyInfiniteConfiguration apply_move_infinite(const LazyInfiniteConfiguration& config,
                                              std::uint64_t k) {
  LazyInfiniteConfiguration next = config;
  next.apply_move_inplace(k);
  return next;
}

Configuration project(const LazyInfiniteConfiguration& config, std::uint64_t n) {
  if (n == 0) throw InvalidParams("projection size must be positive");
  std::vector<std::uint64_t> kept;
  std::uint64_t cum = 0;
  for (std::uint64_t depth = 0; cum < n; ++depth) {
    std::uint64_t take = std::min(config.bin(depth), n - cum);
    kept.push_back(take);
    cum += take;
  }
  std::reverse(kept.begin(), kept.end());
  return Configuration(std::move(kept));
}

std::vector<std::uint64_t> top_bins(const LazyInfiniteConfiguration& config,
                                    std::uint64_t depth) {
  std::vector<std::uint64_t> out;
  out.reserve(depth);
  for (std::uint64_t d = depth; d-- > 0;) out.push_back(config.bin(d));
  return out;
}

bool equal_projection(const LazyInfiniteConfiguration& a,
                      const LazyInfiniteConfiguration& b, std::uint64_t n) {
  std::uint64_t cum = 0;
  for (std::uint64_t depth = 0; cum < n; ++depth) {
    std::uint64_t ta = std::min(a.bin(depth), n - cum);
    std::uint64_t tb = std::min(b.bin(depth), n - cum);
    if (ta != tb) return false;
    cum += ta;
  }
  return true;
}

}  // namespace infbin
