#pragma once

// Seeded Markov-chain simulation: i.i.d. move types drawn from a small
// family of integer distributions, applied to an infinite configuration.
// Includes watch-word tracking (regeneration events), front-speed and
// periodicity measurements, a shared-noise two-chain coupling run, and an
// empirical stationary-law comparison between two initial conditions.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "infbin/configuration.hpp"
#include "infbin/coupling.hpp"
#include "infbin/errors.hpp"
#include "infbin/word.hpp"

namespace infbin {

// splitmix64; used to derive independent per-replica seeds from one master
// seed, so adding replicas never perturbs existing ones
std::uint64_t splitmix64_next(std::uint64_t& state);
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index);

// Move-type distributions. Text forms:
//   det:3            point mass at 3
//   unif:2,5         uniform over the listed values
//   cat:2@0.3,5@0.7  categorical with explicit weights (must sum to 1)
struct DistributionSpec {
  enum class Kind { Deterministic, Uniform, Categorical };
  Kind kind = Kind::Deterministic;
  std::vector<std::uint64_t> values;
  std::vector<double> probs;  // categorical only, aligned with values

  static DistributionSpec parse(std::string_view text);
  std::uint64_t max_value() const { return values.back(); }
  bool single_point() const { return values.size() == 1; }
  double prob_of(std::uint64_t v) const;
  std::string to_string() const;
};

// Deterministic sampler: mt19937_64 plus hand-rolled rejection / CDF
// inversion, so streams are identical across platforms and compilers.
class MoveSampler {
 public:
  MoveSampler(DistributionSpec spec, std::uint64_t seed);
  std::uint64_t next();

 private:
  DistributionSpec spec_;
  std::mt19937_64 rng_;
  std::vector<double> cdf_;  // categorical only
};

// A regeneration watch: whenever the last length(word) moves spell out the
// word, the rightmost projection_balls balls are pinned to `expected`.
struct WatchSpec {
  MoveWord word;
  std::uint64_t projection_balls = 0;
  Configuration expected{std::vector<std::uint64_t>{1}};

  // probability that the next length(word) draws spell the word
  double rate(const DistributionSpec& dist) const;
};

// watch built from the coupling plan for (k, l) with N = l
WatchSpec watch_from_plan(std::uint64_t k, std::uint64_t l);

struct WatchStats {
  std::string word;
  std::uint64_t length = 0;
  std::uint64_t positions = 0;  // steps - length + 1, when nonnegative
  std::uint64_t occurrences = 0;
  std::optional<std::uint64_t> first_step;  // step at which the first match completes
  double expected_rate = 0.0;
  double expected_count = 0.0;
  std::uint64_t projection_mismatches = 0;  // firings whose pinned projection was wrong
  std::vector<std::uint64_t> regeneration_steps;
  bool truncated = false;  // regeneration_steps hit its cap
};

struct PeriodInfo {
  std::uint64_t period = 0;
  std::uint64_t onset = 0;  // first step of the periodic regime
  double speed = 0.0;       // new bins per step within one period
};

struct RunOptions {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t histogram_depth = 2;  // bins per regeneration-time sample
  std::optional<WatchSpec> watch;
  std::uint64_t max_regen_times = 10000;
  std::uint64_t period_cap = 10000;  // largest period considered for point masses
  // called after every move with (1-based step, move type, state)
  std::function<void(std::uint64_t, std::uint64_t, const LazyInfiniteConfiguration&)> on_step;
};

struct SingleChainReport {
  std::string initial;
  std::string dist;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t bins_created = 0;
  double front_speed = 0.0;  // bins_created / steps, the whole run
  // over the window after burn_in; absent when the run is shorter than that
  std::optional<double> front_speed_post_burn_in;
  std::string final_top;  // rightmost bins of the final state
  std::optional<WatchStats> watch;
  std::optional<PeriodInfo> period;  // point-mass distributions only
  // depth-histogram_depth rightmost-bin contents, sampled at each
  // regeneration time (regenerative batching) — empty without a watch
  std::map<std::string, std::uint64_t> top_bin_histogram;
};

SingleChainReport run_chain(const LazyInfiniteConfiguration& initial,
                            const DistributionSpec& dist, const RunOptions& opts);

struct TwoChainReport {
  std::string initial_a;
  std::string initial_b;
  std::string dist;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t projection_balls = 0;
  bool agreed = false;
  // first step from which the two projections agree through the horizon
  std::optional<std::uint64_t> agreement_step;
  std::optional<std::uint64_t> first_watch_step;
  std::uint64_t watch_occurrences = 0;
  bool coupled_by_watch = false;  // watch fired and agreement held from then on
  std::uint64_t projection_mismatches = 0;
};

// Both chains consume the same move sequence (shared noise). The optional
// callback sees (1-based step, chain a, chain b) after every shared move.
using TwoChainObserver = std::function<void(
    std::uint64_t, const LazyInfiniteConfiguration&, const LazyInfiniteConfiguration&)>;
TwoChainReport run_two_chain_coupling(const LazyInfiniteConfiguration& initial_a,
                                      const LazyInfiniteConfiguration& initial_b,
                                      const DistributionSpec& dist, std::uint64_t steps,
                                      std::uint64_t seed, const WatchSpec& watch,
                                      const TwoChainObserver& on_step = {});

struct TvPoint {
  std::uint64_t step = 0;
  double tv = 0.0;
};

// A multi-seed two-chain sweep. Each seed drives one shared-noise pair; at a
// geometric ladder of checkpoint steps the depth-bin top patterns of the two
// sides are tallied across seeds, giving an empirical total-variation series
// that decays to zero once every pair has coupled.
struct CoupleSweepReport {
  std::uint64_t k = 0;
  std::uint64_t l = 0;
  std::string dist;
  std::string initial_a;
  std::string initial_b;
  std::uint64_t steps = 0;
  std::uint64_t depth = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<TwoChainReport> runs;      // ordered like seeds
  std::vector<TvPoint> tv_series;        // across-seed TV at each checkpoint
};

CoupleSweepReport run_couple_sweep(const LazyInfiniteConfiguration& initial_a,
                                   const LazyInfiniteConfiguration& initial_b,
                                   const DistributionSpec& dist, std::uint64_t steps,
                                   const std::vector<std::uint64_t>& seeds,
                                   std::uint64_t k, std::uint64_t l,
                                   std::uint64_t depth = 2, unsigned threads = 1);

struct StationaryCell {
  std::string pattern;  // rightmost-depth bin contents, leftmost first
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
};

struct StationaryReport {
  std::string dist;
  std::uint64_t depth = 0;
  std::uint64_t replicas = 0;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::string initial_a;
  std::string initial_b;
  std::vector<StationaryCell> cells;
  double tv = 0.0;             // total variation between the two empirical laws
  double noise_expected = 0.0; // expected TV under equal laws
  double noise_sd = 0.0;
  double noise_floor = 0.0;    // noise_expected + 3 * noise_sd
  bool within_floor = false;
};

// One independent chain per (initial, replica); each contributes a single
// observation, the top-depth pattern of its final state, so the samples
// behind the two empirical laws are i.i.d.
StationaryReport estimate_stationary(const LazyInfiniteConfiguration& initial_a,
                                     const LazyInfiniteConfiguration& initial_b,
                                     const DistributionSpec& dist, std::uint64_t depth,
                                     std::uint64_t replicas, std::uint64_t steps,
                                     std::uint64_t seed, unsigned threads = 1);

void to_json(nlohmann::ordered_json& j, const WatchStats& stats);
void to_json(nlohmann::ordered_json& j, const SingleChainReport& report);
void to_json(nlohmann::ordered_json& j, const TwoChainReport& report);
void to_json(nlohmann::ordered_json& j, const CoupleSweepReport& report);
void to_json(nlohmann::ordered_json& j, const StationaryReport& report);

}  // namespace infbin
