#include <doctest.h>

#include <set>

#include "infbin/simulate.hpp"

using namespace infbin;

TEST_CASE("replica seeds are the splitmix64 stream") {
  // first output of splitmix64 seeded with 0 is a published test vector
  CHECK(replica_seed(0, 0) == 0xe220a8397b1dcdafULL);
  CHECK(replica_seed(0, 1) != replica_seed(0, 0));
  CHECK(replica_seed(7, 3) == replica_seed(7, 3));
  std::uint64_t state = 0;
  CHECK(splitmix64_next(state) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64_next(state) == replica_seed(0, 1));
}

TEST_CASE("distribution parsing") {
  const DistributionSpec det = DistributionSpec::parse("det:3");
  CHECK(det.kind == DistributionSpec::Kind::Deterministic);
  CHECK(det.values == std::vector<std::uint64_t>{3});
  CHECK(det.single_point());
  CHECK(det.to_string() == "det:3");

  const DistributionSpec unif = DistributionSpec::parse("unif:5,2");
  CHECK(unif.kind == DistributionSpec::Kind::Uniform);
  CHECK(unif.values == std::vector<std::uint64_t>{2, 5});
  CHECK(unif.max_value() == 5);
  CHECK_FALSE(unif.single_point());
  CHECK(unif.to_string() == "unif:2,5");
  CHECK(unif.prob_of(2) == 0.5);
  CHECK(unif.prob_of(5) == 0.5);
  CHECK(unif.prob_of(3) == 0.0);

  const DistributionSpec cat = DistributionSpec::parse("cat:2@0.3,5@0.7");
  CHECK(cat.kind == DistributionSpec::Kind::Categorical);
  CHECK(cat.values == std::vector<std::uint64_t>{2, 5});
  CHECK(cat.prob_of(2) == 0.3);
  CHECK(cat.prob_of(5) == 0.7);
  CHECK(cat.to_string() == "cat:2@0.3,5@0.7");
}

TEST_CASE("distribution parse errors") {
  CHECK_THROWS_AS(DistributionSpec::parse("unif:"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("det:1,2"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("det:0"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("unif:2,2"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("cat:2@0.3"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("cat:2@0.5,2@0.5"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("cat:2@0,5@1"), InvalidDistribution);
  // probabilities must sum to one within 1e-12; a 1e-7 slip is rejected
  CHECK_THROWS_AS(DistributionSpec::parse("cat:2@0.5,5@0.5000001"), InvalidDistribution);
  CHECK_NOTHROW(DistributionSpec::parse("cat:2@0.25,5@0.75"));
  CHECK_THROWS_AS(DistributionSpec::parse("geom:3"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("3"), InvalidDistribution);
  CHECK_THROWS_AS(DistributionSpec::parse("unif:2,x"), InvalidDistribution);
}

TEST_CASE("samplers draw only supported values, reproducibly") {
  MoveSampler det(DistributionSpec::parse("det:3"), 1);
  for (int i = 0; i < 10; ++i) CHECK(det.next() == 3);

  MoveSampler u1(DistributionSpec::parse("unif:2,5"), 42);
  MoveSampler u2(DistributionSpec::parse("unif:2,5"), 42);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = u1.next();
    CHECK(v == u2.next());
    seen.insert(v);
  }
  CHECK(seen == std::set<std::uint64_t>{2, 5});

  MoveSampler cat(DistributionSpec::parse("cat:2@0.3,5@0.7"), 9);
  std::set<std::uint64_t> cat_seen;
  for (int i = 0; i < 1000; ++i) cat_seen.insert(cat.next());
  CHECK(cat_seen == std::set<std::uint64_t>{2, 5});
}

TEST_CASE("watch words carry the coupling guarantee") {
  const WatchSpec watch = watch_from_plan(2, 5);
  CHECK(watch.word == MoveWord::parse("2^6 5^4 2^3"));
  CHECK(watch.projection_balls == 5);
  CHECK(watch.expected == Configuration::parse("[2,2,1]"));
  // thirteen letters, each hit with probability 1/2
  CHECK(watch.rate(DistributionSpec::parse("unif:2,5")) == 0x1.0p-13);
  CHECK(watch.rate(DistributionSpec::parse("unif:2,3")) == 0.0);
  CHECK(watch.rate(DistributionSpec::parse("det:1")) == 0.0);
}

TEST_CASE("deterministic unit moves push the front at speed one") {
  for (const std::uint64_t steps : {1ULL, 37ULL, 1000ULL}) {
    RunOptions opts;
    opts.steps = steps;
    const SingleChainReport r = run_chain(LazyInfiniteConfiguration(1),
                                          DistributionSpec::parse("det:1"), opts);
    CHECK(r.bins_created == steps);
    CHECK(r.front_speed == 1.0);
    // these runs never outlive the burn-in window, so no post-burn-in speed
    CHECK_FALSE(r.front_speed_post_burn_in.has_value());
    if (steps >= 3) {  // three full periods must fit before one is reported
      REQUIRE(r.period.has_value());
      CHECK(r.period->period == 1);
      CHECK(r.period->speed == 1.0);
    }
  }
}

TEST_CASE("post-burn-in speed appears only when the run outlives the burn-in") {
  RunOptions opts;
  opts.steps = 2500;
  const SingleChainReport r = run_chain(LazyInfiniteConfiguration(1),
                                        DistributionSpec::parse("det:1"), opts);
  CHECK(r.burn_in == 1000);  // max(10 * largest move, 1000)
  REQUIRE(r.front_speed_post_burn_in.has_value());
  CHECK(*r.front_speed_post_burn_in == 1.0);
}

TEST_CASE("deterministic pair moves alternate") {
  RunOptions opts;
  opts.steps = 1000;
  const SingleChainReport r = run_chain(LazyInfiniteConfiguration(1),
                                        DistributionSpec::parse("det:2"), opts);
  REQUIRE(r.period.has_value());
  CHECK(r.period->period == 2);
  CHECK(r.period->speed == 0.5);
  CHECK(r.period->onset + 3 * r.period->period <= opts.steps);
}

TEST_CASE("watch statistics and regeneration checks") {
  // under det:1 the two-letter word 1^2 completes at every step from 2 on
  RunOptions opts;
  opts.steps = 5;
  opts.watch = watch_from_plan(1, 2);
  opts.max_regen_times = 2;
  const SingleChainReport r = run_chain(LazyInfiniteConfiguration(1),
                                        DistributionSpec::parse("det:1"), opts);
  REQUIRE(r.watch.has_value());
  CHECK(r.watch->length == 2);
  CHECK(r.watch->positions == 4);
  CHECK(r.watch->occurrences == 4);
  CHECK(r.watch->first_step == 2);
  CHECK(r.watch->expected_rate == 1.0);
  CHECK(r.watch->expected_count == 4.0);
  CHECK(r.watch->projection_mismatches == 0);
  CHECK(r.watch->regeneration_steps == std::vector<std::uint64_t>{2, 3});
  CHECK(r.watch->truncated);
}

TEST_CASE("regenerations pin the projection in random chains") {
  RunOptions opts;
  opts.steps = 200000;
  opts.seed = 11;
  opts.watch = watch_from_plan(2, 5);
  const SingleChainReport r = run_chain(LazyInfiniteConfiguration(1),
                                        DistributionSpec::parse("unif:2,5"), opts);
  REQUIRE(r.watch.has_value());
  CHECK(r.watch->occurrences > 0);
  CHECK(r.watch->projection_mismatches == 0);
  CHECK(r.watch->first_step == r.watch->regeneration_steps.front());
  CHECK_FALSE(r.watch->truncated);
}

TEST_CASE("top-bin histogram samples at regeneration times") {
  RunOptions opts;
  opts.steps = 10;
  opts.watch = watch_from_plan(1, 2);
  const SingleChainReport r = run_chain(LazyInfiniteConfiguration(1),
                                        DistributionSpec::parse("det:1"), opts);
  CHECK(r.burn_in == 1000);  // max(10 * largest move, 1000), never shortened
  // nine regenerations (steps 2..10), each seeing two fresh single-ball bins
  REQUIRE(r.top_bin_histogram.size() == 1);
  CHECK(r.top_bin_histogram.at("[1,1]") == 9);

  // without a watch word there are no regeneration times, hence no samples
  RunOptions plain;
  plain.steps = 10;
  const SingleChainReport p = run_chain(LazyInfiniteConfiguration(1),
                                        DistributionSpec::parse("det:1"), plain);
  CHECK(p.top_bin_histogram.empty());
}

TEST_CASE("two chains under shared noise couple at a regeneration") {
  const auto a = LazyInfiniteConfiguration::parse("base:1");
  const auto b = LazyInfiniteConfiguration::parse("base:3");
  const WatchSpec watch = watch_from_plan(2, 5);
  const TwoChainReport r = run_two_chain_coupling(
      a, b, DistributionSpec::parse("unif:2,5"), 200000, 3, watch);
  CHECK(r.projection_mismatches == 0);
  REQUIRE(r.first_watch_step.has_value());
  CHECK(r.agreed);
  REQUIRE(r.agreement_step.has_value());
  CHECK(*r.agreement_step <= *r.first_watch_step);
  CHECK(r.coupled_by_watch);

  // identical initials agree from step zero
  const TwoChainReport same = run_two_chain_coupling(
      a, a, DistributionSpec::parse("unif:2,5"), 100, 3, watch);
  CHECK(same.agreement_step == 0);
}

TEST_CASE("couple sweep: cross-seed TV starts at one and hits zero after coupling") {
  const auto a = LazyInfiniteConfiguration::parse("base:1");
  const auto b = LazyInfiniteConfiguration::parse("base:3");
  const DistributionSpec dist = DistributionSpec::parse("unif:2,5");
  const std::vector<std::uint64_t> seeds{0, 1, 2, 3};
  const CoupleSweepReport r = run_couple_sweep(a, b, dist, 65536, seeds, 2, 5, 2, 1);
  CHECK(r.runs.size() == 4);
  REQUIRE(r.tv_series.size() == 17);  // 1, 2, 4, ..., 32768, 65536
  CHECK(r.tv_series.front().step == 1);
  CHECK(r.tv_series.back().step == 65536);
  for (std::size_t i = 1; i < r.tv_series.size(); ++i)
    CHECK(r.tv_series[i - 1].step < r.tv_series[i].step);
  // after one shared move the two sides' top patterns are disjoint laws
  CHECK(r.tv_series.front().tv == 1.0);
  // every seed pair couples within the horizon, so the final TV vanishes
  for (const TwoChainReport& run : r.runs) CHECK(run.agreed);
  CHECK(r.tv_series.back().tv == 0.0);

  // deterministic merge regardless of worker threads
  const CoupleSweepReport r4 = run_couple_sweep(a, b, dist, 65536, seeds, 2, 5, 2, 4);
  nlohmann::ordered_json j1, j4;
  to_json(j1, r);
  to_json(j4, r4);
  CHECK(j1.dump() == j4.dump());

  CHECK_THROWS_AS(run_couple_sweep(a, b, dist, 16, {}, 2, 5, 2, 1), InvalidParams);
  CHECK_THROWS_AS(run_couple_sweep(a, b, dist, 16, seeds, 2, 5, 0, 1), InvalidParams);
}

TEST_CASE("stationary comparison is deterministic and thread-invariant") {
  const auto a = LazyInfiniteConfiguration::parse("base:1");
  const auto b = LazyInfiniteConfiguration::parse("base:3");
  const DistributionSpec dist = DistributionSpec::parse("unif:2,5");
  const StationaryReport r1 = estimate_stationary(a, b, dist, 2, 10, 2000, 7, 1);
  const StationaryReport r4 = estimate_stationary(a, b, dist, 2, 10, 2000, 7, 4);
  nlohmann::ordered_json j1, j4;
  to_json(j1, r1);
  to_json(j4, r4);
  CHECK(j1.dump() == j4.dump());

  std::uint64_t total_a = 0, total_b = 0;
  for (const StationaryCell& cell : r1.cells) {
    total_a += cell.count_a;
    total_b += cell.count_b;
  }
  CHECK(total_a == 10);
  CHECK(total_b == 10);
  CHECK(r1.noise_floor > 0.0);

  // any single-point law is rejected, whatever the spelling
  CHECK_THROWS_AS(estimate_stationary(a, b, DistributionSpec::parse("det:2"), 2, 4, 10, 1),
                  InvalidDistribution);
  CHECK_THROWS_AS(estimate_stationary(a, b, DistributionSpec::parse("unif:1"), 2, 4, 10, 1),
                  InvalidDistribution);
}
