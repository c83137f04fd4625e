#include "infbin/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include "infbin/parallel.hpp"

namespace infbin {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  // the index-th output of the splitmix64 stream seeded with master
  std::uint64_t state = master + index * 0x9e3779b97f4a7c15ULL;
  return splitmix64_next(state);
}

namespace {

std::uint64_t parse_dist_uint(std::string_view item) {
  std::uint64_t value = 0;
  const char* first = item.data();
  const char* last = item.data() + item.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw InvalidDistribution("bad integer '" + std::string(item) + "'");
  return value;
}

double parse_dist_prob(std::string_view item) {
  const std::string text(item);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty())
    throw InvalidDistribution("bad probability '" + text + "'");
  if (!(value > 0.0) || value > 1.0)
    throw InvalidDistribution("probability " + text + " is outside (0, 1]");
  return value;
}

std::vector<std::string_view> split_items(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item.empty()) throw InvalidDistribution("empty entry in value list");
    items.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

std::string format_double(double v) { return nlohmann::json(v).dump(); }

std::string pattern_string(const std::vector<std::uint64_t>& bins) {
  std::string out = "[";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(bins[i]);
  }
  out += "]";
  return out;
}

}  // namespace

DistributionSpec DistributionSpec::parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw InvalidDistribution("expected kind:values, got '" + std::string(text) + "'");
  const std::string_view kind_text = text.substr(0, colon);
  const std::vector<std::string_view> items = split_items(text.substr(colon + 1));

  DistributionSpec spec;
  if (kind_text == "det") {
    spec.kind = Kind::Deterministic;
    if (items.size() != 1)
      throw InvalidDistribution("det takes exactly one value");
    spec.values.push_back(parse_dist_uint(items[0]));
  } else if (kind_text == "unif") {
    spec.kind = Kind::Uniform;
    for (std::string_view item : items) spec.values.push_back(parse_dist_uint(item));
  } else if (kind_text == "cat") {
    spec.kind = Kind::Categorical;
    std::vector<std::pair<std::uint64_t, double>> pairs;
    for (std::string_view item : items) {
      const std::size_t at = item.find('@');
      if (at == std::string_view::npos)
        throw InvalidDistribution("cat entries look like value@prob, got '" +
                                  std::string(item) + "'");
      pairs.emplace_back(parse_dist_uint(item.substr(0, at)),
                         parse_dist_prob(item.substr(at + 1)));
    }
    std::sort(pairs.begin(), pairs.end());
    double total = 0.0;
    for (const auto& [v, p] : pairs) {
      spec.values.push_back(v);
      spec.probs.push_back(p);
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw InvalidDistribution("cat probabilities sum to " + format_double(total) +
                                ", expected 1");
  } else {
    throw InvalidDistribution("unknown distribution kind '" + std::string(kind_text) + "'");
  }

  if (spec.kind != Kind::Categorical) std::sort(spec.values.begin(), spec.values.end());
  for (std::uint64_t v : spec.values)
    if (v == 0) throw InvalidDistribution("move types must be positive");
  if (std::adjacent_find(spec.values.begin(), spec.values.end()) != spec.values.end())
    throw InvalidDistribution("duplicate value in distribution");
  return spec;
}

double DistributionSpec::prob_of(std::uint64_t v) const {
  const auto it = std::find(values.begin(), values.end(), v);
  if (it == values.end()) return 0.0;
  switch (kind) {
    case Kind::Deterministic:
      return 1.0;
    case Kind::Uniform:
      return 1.0 / static_cast<double>(values.size());
    case Kind::Categorical:
      return probs[static_cast<std::size_t>(it - values.begin())];
  }
  return 0.0;
}

std::string DistributionSpec::to_string() const {
  std::string out;
  switch (kind) {
    case Kind::Deterministic:
      out = "det:";
      break;
    case Kind::Uniform:
      out = "unif:";
      break;
    case Kind::Categorical:
      out = "cat:";
      break;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
    if (kind == Kind::Categorical) out += "@" + format_double(probs[i]);
  }
  return out;
}

MoveSampler::MoveSampler(DistributionSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed) {
  if (spec_.kind == DistributionSpec::Kind::Categorical) {
    double acc = 0.0;
    for (double p : spec_.probs) {
      acc += p;
      cdf_.push_back(acc);
    }
  }
}

std::uint64_t MoveSampler::next() {
  switch (spec_.kind) {
    case DistributionSpec::Kind::Deterministic:
      return spec_.values.front();
    case DistributionSpec::Kind::Uniform: {
      const std::uint64_t n = spec_.values.size();
      if (n == 1) return spec_.values.front();
      // accept draws below the largest multiple of n, keeping the law exact
      const std::uint64_t residue = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
      while (true) {
        const std::uint64_t x = rng_();
        if (residue != 0 && x > std::numeric_limits<std::uint64_t>::max() - residue)
          continue;
        return spec_.values[x % n];
      }
    }
    case DistributionSpec::Kind::Categorical: {
      const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
      for (std::size_t i = 0; i + 1 < cdf_.size(); ++i)
        if (u < cdf_[i]) return spec_.values[i];
      return spec_.values.back();
    }
  }
  return spec_.values.front();
}

double WatchSpec::rate(const DistributionSpec& dist) const {
  double r = 1.0;
  for (const MoveWord::Run& run : word.runs())
    r *= std::pow(dist.prob_of(run.type), static_cast<double>(run.repeat));
  return r;
}

WatchSpec watch_from_plan(std::uint64_t k, std::uint64_t l) {
  const CouplingPlan plan = build_coupling_plan(k, l, l);
  WatchSpec watch;
  watch.word = plan.word;
  watch.projection_balls = l;
  watch.expected = plan.target;
  return watch;
}

namespace {

// Knuth-Morris-Pratt over the move stream; overlapping matches count.
class WordMatcher {
 public:
  explicit WordMatcher(std::vector<std::uint64_t> pattern)
      : pattern_(std::move(pattern)), fail_(pattern_.size(), 0) {
    for (std::size_t i = 1; i < pattern_.size(); ++i) {
      std::size_t j = fail_[i - 1];
      while (j > 0 && pattern_[i] != pattern_[j]) j = fail_[j - 1];
      fail_[i] = pattern_[i] == pattern_[j] ? j + 1 : 0;
    }
  }

  bool feed(std::uint64_t letter) {
    while (matched_ > 0 && letter != pattern_[matched_]) matched_ = fail_[matched_ - 1];
    if (letter == pattern_[matched_]) ++matched_;
    if (matched_ == pattern_.size()) {
      matched_ = fail_[matched_ - 1];
      return true;
    }
    return false;
  }

 private:
  std::vector<std::uint64_t> pattern_;
  std::vector<std::size_t> fail_;
  std::size_t matched_ = 0;
};

std::uint64_t burn_in_steps(const DistributionSpec& dist) {
  return std::max<std::uint64_t>(10 * dist.max_value(), 1000);
}

// Smallest period of the eventual tail of the 0/1 "new bin" sequence. The
// onset is the step after the last violation; three full periods after the
// onset must fit, or the call reports nothing.
std::optional<PeriodInfo> detect_period(const std::vector<std::uint8_t>& s,
                                        std::uint64_t cap) {
  const std::uint64_t horizon = s.size();
  for (std::uint64_t p = 1; p <= cap && p <= horizon; ++p) {
    std::uint64_t onset = 0;
    for (std::uint64_t t = horizon; t-- > p;)
      if (s[t] != s[t - p]) {
        onset = t + 1;
        break;
      }
    if (onset + 3 * p <= horizon) {
      std::uint64_t ones = 0;
      for (std::uint64_t t = onset; t < onset + p; ++t) ones += s[t];
      PeriodInfo info;
      info.period = p;
      info.onset = onset;
      info.speed = static_cast<double>(ones) / static_cast<double>(p);
      return info;
    }
  }
  return std::nullopt;
}

}  // namespace

SingleChainReport run_chain(const LazyInfiniteConfiguration& initial,
                            const DistributionSpec& dist, const RunOptions& opts) {
  LazyInfiniteConfiguration config = initial;
  MoveSampler sampler(dist, opts.seed);

  SingleChainReport report;
  report.initial = initial.to_string();
  report.dist = dist.to_string();
  report.steps = opts.steps;
  report.seed = opts.seed;
  report.burn_in = burn_in_steps(dist);

  std::optional<WordMatcher> matcher;
  WatchStats watch;
  if (opts.watch) {
    watch.word = opts.watch->word.to_string();
    std::vector<std::uint64_t> letters = opts.watch->word.expanded();
    watch.length = letters.size();
    watch.positions = opts.steps >= watch.length ? opts.steps - watch.length + 1 : 0;
    watch.expected_rate = opts.watch->rate(dist);
    watch.expected_count = static_cast<double>(watch.positions) * watch.expected_rate;
    matcher.emplace(std::move(letters));
  }

  const bool track_period = dist.single_point();
  std::vector<std::uint8_t> created;
  if (track_period) created.reserve(opts.steps);

  const std::uint64_t start_shift = config.shift();
  std::uint64_t shift_at_burn_in = config.shift();
  for (std::uint64_t t = 1; t <= opts.steps; ++t) {
    const std::uint64_t move = sampler.next();
    const std::uint64_t before = config.shift();
    config.apply_move_inplace(move);
    if (track_period) created.push_back(config.shift() != before ? 1 : 0);
    if (t == report.burn_in) shift_at_burn_in = config.shift();
    if (matcher && matcher->feed(move)) {
      ++watch.occurrences;
      if (!watch.first_step) watch.first_step = t;
      if (watch.regeneration_steps.size() < opts.max_regen_times)
        watch.regeneration_steps.push_back(t);
      else
        watch.truncated = true;
      if (project(config, opts.watch->projection_balls) != opts.watch->expected)
        ++watch.projection_mismatches;
      // regenerative batching: one top-pattern sample per regeneration time
      ++report.top_bin_histogram[pattern_string(top_bins(config, opts.histogram_depth))];
    }
    if (opts.on_step) opts.on_step(t, move, config);
  }

  report.bins_created = config.shift() - start_shift;
  report.front_speed = opts.steps > 0
                           ? static_cast<double>(report.bins_created) /
                                 static_cast<double>(opts.steps)
                           : 0.0;
  if (opts.steps > report.burn_in)
    report.front_speed_post_burn_in =
        static_cast<double>(config.shift() - shift_at_burn_in) /
        static_cast<double>(opts.steps - report.burn_in);
  report.final_top = pattern_string(top_bins(config, 8));
  if (matcher) report.watch = std::move(watch);
  if (track_period) report.period = detect_period(created, opts.period_cap);
  return report;
}

TwoChainReport run_two_chain_coupling(const LazyInfiniteConfiguration& initial_a,
                                      const LazyInfiniteConfiguration& initial_b,
                                      const DistributionSpec& dist, std::uint64_t steps,
                                      std::uint64_t seed, const WatchSpec& watch,
                                      const TwoChainObserver& on_step) {
  LazyInfiniteConfiguration a = initial_a;
  LazyInfiniteConfiguration b = initial_b;
  MoveSampler sampler(dist, seed);
  WordMatcher matcher(watch.word.expanded());

  TwoChainReport report;
  report.initial_a = initial_a.to_string();
  report.initial_b = initial_b.to_string();
  report.dist = dist.to_string();
  report.steps = steps;
  report.seed = seed;
  report.projection_balls = watch.projection_balls;

  std::optional<std::uint64_t> candidate;
  if (equal_projection(a, b, watch.projection_balls)) candidate = 0;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    const std::uint64_t move = sampler.next();
    a.apply_move_inplace(move);
    b.apply_move_inplace(move);
    if (equal_projection(a, b, watch.projection_balls)) {
      if (!candidate) candidate = t;
    } else {
      candidate.reset();
    }
    if (matcher.feed(move)) {
      ++report.watch_occurrences;
      if (!report.first_watch_step) report.first_watch_step = t;
      if (project(a, watch.projection_balls) != watch.expected)
        ++report.projection_mismatches;
      if (project(b, watch.projection_balls) != watch.expected)
        ++report.projection_mismatches;
    }
    if (on_step) on_step(t, a, b);
  }
  report.agreement_step = candidate;
  report.agreed = candidate.has_value();
  report.coupled_by_watch = report.first_watch_step.has_value() &&
                            candidate.has_value() &&
                            *candidate <= *report.first_watch_step;
  return report;
}

CoupleSweepReport run_couple_sweep(const LazyInfiniteConfiguration& initial_a,
                                   const LazyInfiniteConfiguration& initial_b,
                                   const DistributionSpec& dist, std::uint64_t steps,
                                   const std::vector<std::uint64_t>& seeds,
                                   std::uint64_t k, std::uint64_t l,
                                   std::uint64_t depth, unsigned threads) {
  if (seeds.empty()) throw InvalidParams("at least one seed is required");
  if (depth == 0) throw InvalidParams("depth must be positive");

  CoupleSweepReport report;
  report.k = k;
  report.l = l;
  report.dist = dist.to_string();
  report.initial_a = initial_a.to_string();
  report.initial_b = initial_b.to_string();
  report.steps = steps;
  report.depth = depth;
  report.seeds = seeds;

  // geometric checkpoint ladder: 1, 2, 4, ... below steps, then steps itself
  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t c = 1; c < steps; c *= 2) {
    checkpoints.push_back(c);
    if (c > steps / 2) break;  // doubling again would overflow past steps
  }
  if (steps > 0) checkpoints.push_back(steps);

  const WatchSpec watch = watch_from_plan(k, l);

  report.runs.resize(seeds.size());
  std::vector<std::vector<std::string>> pat_a(seeds.size());
  std::vector<std::vector<std::string>> pat_b(seeds.size());
  parallel_chunks(0, seeds.size(), resolve_threads(threads),
                  [&](std::uint64_t lo, std::uint64_t hi) {
                    for (std::uint64_t idx = lo; idx < hi; ++idx) {
                      auto& pa = pat_a[idx];
                      auto& pb = pat_b[idx];
                      pa.resize(checkpoints.size());
                      pb.resize(checkpoints.size());
                      std::size_t next = 0;
                      const auto snapshot =
                          [&](std::uint64_t step, const LazyInfiniteConfiguration& a,
                              const LazyInfiniteConfiguration& b) {
                            if (next < checkpoints.size() && checkpoints[next] == step) {
                              pa[next] = pattern_string(top_bins(a, depth));
                              pb[next] = pattern_string(top_bins(b, depth));
                              ++next;
                            }
                          };
                      report.runs[idx] = run_two_chain_coupling(
                          initial_a, initial_b, dist, steps, seeds[idx], watch, snapshot);
                    }
                  });

  // empirical TV between the two sides' pattern laws across seeds
  const double n = static_cast<double>(seeds.size());
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> tally;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      ++tally[pat_a[i][c]].first;
      ++tally[pat_b[i][c]].second;
    }
    double l1 = 0.0;
    for (const auto& [pattern, counts] : tally)
      l1 += std::abs(static_cast<double>(counts.first) / n -
                     static_cast<double>(counts.second) / n);
    TvPoint point;
    point.step = checkpoints[c];
    point.tv = 0.5 * l1;
    report.tv_series.push_back(point);
  }
  return report;
}

StationaryReport estimate_stationary(const LazyInfiniteConfiguration& initial_a,
                                     const LazyInfiniteConfiguration& initial_b,
                                     const DistributionSpec& dist, std::uint64_t depth,
                                     std::uint64_t replicas, std::uint64_t steps,
                                     std::uint64_t seed, unsigned threads) {
  if (dist.single_point())
    throw InvalidDistribution("stationary comparison needs more than one move type");
  if (depth == 0) throw InvalidParams("depth must be positive");
  if (replicas == 0) throw InvalidParams("replicas must be positive");

  StationaryReport report;
  report.dist = dist.to_string();
  report.depth = depth;
  report.replicas = replicas;
  report.steps = steps;
  report.seed = seed;
  report.initial_a = initial_a.to_string();
  report.initial_b = initial_b.to_string();

  // one observation per chain: the final top-depth pattern
  std::vector<std::vector<std::uint64_t>> samples(2 * replicas);
  parallel_chunks(0, 2 * replicas, resolve_threads(threads),
                  [&](std::uint64_t lo, std::uint64_t hi) {
                    for (std::uint64_t idx = lo; idx < hi; ++idx) {
                      LazyInfiniteConfiguration config =
                          idx < replicas ? initial_a : initial_b;
                      MoveSampler sampler(dist, replica_seed(seed, idx));
                      for (std::uint64_t t = 0; t < steps; ++t)
                        config.apply_move_inplace(sampler.next());
                      samples[idx] = top_bins(config, depth);
                    }
                  });

  std::map<std::vector<std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>> tally;
  for (std::uint64_t idx = 0; idx < 2 * replicas; ++idx) {
    auto& cell = tally[samples[idx]];
    if (idx < replicas)
      ++cell.first;
    else
      ++cell.second;
  }

  const double n_a = static_cast<double>(replicas);
  const double n_b = static_cast<double>(replicas);
  const double two_over_pi = 2.0 / std::numbers::pi;
  double l1 = 0.0;
  double expected_sum = 0.0;
  double var_sum = 0.0;
  for (const auto& [pattern, counts] : tally) {
    StationaryCell cell;
    cell.pattern = pattern_string(pattern);
    cell.count_a = counts.first;
    cell.count_b = counts.second;
    report.cells.push_back(std::move(cell));
    const double pa = counts.first / n_a;
    const double pb = counts.second / n_b;
    l1 += std::abs(pa - pb);
    const double pooled = (counts.first + counts.second) / (n_a + n_b);
    const double var_i = pooled * (1.0 - pooled) * (1.0 / n_a + 1.0 / n_b);
    expected_sum += std::sqrt(var_i) * std::sqrt(two_over_pi);
    var_sum += var_i * (1.0 - two_over_pi);
  }
  report.tv = 0.5 * l1;
  report.noise_expected = 0.5 * expected_sum;
  report.noise_sd = 0.5 * std::sqrt(var_sum);
  report.noise_floor = report.noise_expected + 3.0 * report.noise_sd;
  report.within_floor = report.tv <= report.noise_floor;
  return report;
}

void to_json(nlohmann::ordered_json& j, const WatchStats& stats) {
  j = nlohmann::ordered_json{
      {"word", stats.word},
      {"length", stats.length},
      {"positions", stats.positions},
      {"occurrences", stats.occurrences},
      {"firstStep",
       stats.first_step ? nlohmann::ordered_json(*stats.first_step) : nullptr},
      {"expectedRate", stats.expected_rate},
      {"expectedCount", stats.expected_count},
      {"projectionMismatches", stats.projection_mismatches},
      {"truncated", stats.truncated},
  };
}

void to_json(nlohmann::ordered_json& j, const SingleChainReport& report) {
  j = nlohmann::ordered_json{
      {"initial", report.initial},
      {"distribution", report.dist},
      {"steps", report.steps},
      {"seed", report.seed},
      {"burnIn", report.burn_in},
      {"binsCreated", report.bins_created},
      {"frontSpeedEstimate", report.front_speed},
      {"frontSpeedPostBurnIn",
       report.front_speed_post_burn_in
           ? nlohmann::ordered_json(*report.front_speed_post_burn_in)
           : nullptr},
      {"finalTop", report.final_top},
      {"regenerationTimes", report.watch
                                ? nlohmann::ordered_json(report.watch->regeneration_steps)
                                : nlohmann::ordered_json::array()},
  };
  if (report.watch) {
    nlohmann::ordered_json w;
    to_json(w, *report.watch);
    j["watch"] = std::move(w);
  } else {
    j["watch"] = nullptr;
  }
  if (report.period) {
    j["period"] = nlohmann::ordered_json{{"period", report.period->period},
                                         {"onset", report.period->onset},
                                         {"speed", report.period->speed}};
  } else {
    j["period"] = nullptr;
  }
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [pattern, count] : report.top_bin_histogram) hist[pattern] = count;
  j["topBinHistogram"] = std::move(hist);
}

void to_json(nlohmann::ordered_json& j, const TwoChainReport& report) {
  j = nlohmann::ordered_json{
      {"initialA", report.initial_a},
      {"initialB", report.initial_b},
      {"distribution", report.dist},
      {"steps", report.steps},
      {"seed", report.seed},
      {"projectionBalls", report.projection_balls},
      {"agreed", report.agreed},
      {"agreementStep",
       report.agreement_step ? nlohmann::ordered_json(*report.agreement_step) : nullptr},
      {"firstWatchStep", report.first_watch_step
                             ? nlohmann::ordered_json(*report.first_watch_step)
                             : nullptr},
      {"watchOccurrences", report.watch_occurrences},
      {"coupledByWatch", report.coupled_by_watch},
      {"projectionMismatches", report.projection_mismatches},
  };
}

void to_json(nlohmann::ordered_json& j, const CoupleSweepReport& report) {
  j = nlohmann::ordered_json{
      {"k", report.k},
      {"l", report.l},
      {"distribution", report.dist},
      {"initialA", report.initial_a},
      {"initialB", report.initial_b},
      {"steps", report.steps},
      {"depth", report.depth},
      {"seeds", report.seeds},
  };
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const TwoChainReport& run : report.runs) {
    nlohmann::ordered_json r;
    to_json(r, run);
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  for (const TvPoint& point : report.tv_series)
    series.push_back(nlohmann::ordered_json{{"step", point.step}, {"tv", point.tv}});
  j["tvDistanceSeries"] = std::move(series);
}

void to_json(nlohmann::ordered_json& j, const StationaryReport& report) {
  j = nlohmann::ordered_json{
      {"distribution", report.dist}, {"depth", report.depth},
      {"replicas", report.replicas}, {"steps", report.steps},
      {"seed", report.seed},         {"initialA", report.initial_a},
      {"initialB", report.initial_b},
      {"tv", report.tv},             {"noiseExpected", report.noise_expected},
      {"noiseSd", report.noise_sd},  {"noiseFloor", report.noise_floor},
      {"withinFloor", report.within_floor},
  };
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const StationaryCell& cell : report.cells)
    cells.push_back(nlohmann::ordered_json{{"pattern", cell.pattern},
                                           {"countA", cell.count_a},
                                           {"countB", cell.count_b}});
  j["cells"] = std::move(cells);
}

}  // namespace infbin
