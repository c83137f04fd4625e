#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "infbin/coupling.hpp"
#include "infbin/enumeration.hpp"

namespace infbin {

// Brute-force verification of the coupling construction's supporting claims.
// Every check enumerates its whole domain (all l-ball configurations where
// one is quantified) and compares raw configuration values; nothing is
// trusted from the constructions beyond the family members the claims are
// literally about.

struct CheckResult {
  std::string name;
  bool pass = false;
  std::optional<std::string> counterexample;
};

struct VerificationReport {
  std::uint64_t k = 0;
  std::uint64_t l = 0;
  std::optional<std::uint64_t> n_balls;
  std::uint64_t universe = 0;
  double elapsed_ms = 0.0;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// k^M drives every l-ball configuration into {X_0, ..., X_{k-1}}.
CheckResult verify_lemma_kcycle(const CouplingParams& params, unsigned threads = 1);

// One Psi pass moves X_i to X_{f(i)}.
CheckResult verify_lemma_psiaction(const CouplingParams& params);

// f(0) = 0, f(i) < i, f nondecreasing, and f^(k-1) hits 0 from every start.
CheckResult verify_lemma_fproperties(const CouplingParams& params);

// Part 1: [i_1,...,i_p] reaches Y_{l - i_p} after sum_{j=1..p-2}(p-1-j) i_j
// l-moves. Part 2: l-k k-moves take Y_j to X_{max(k-l+j, 0)}.
CheckResult verify_lemma_klaction(const CouplingParams& params, unsigned threads = 1);

// The weighted ball distance of the k-ball projection [i_1,...,i_p], namely
// sum_{j=1..p-1}(p-j) i_j, is at most k(k-1)/2, with equality exactly for
// the all-ones projection of full length k.
CheckResult verify_weighted_distance(const CouplingParams& params, unsigned threads = 1);

// After that many k-moves the bin that was originally rightmost has filled
// to exactly k balls (trivially already >= k when it started with >= k).
CheckResult verify_rightmost_fill(const CouplingParams& params, unsigned threads = 1);

// The full coupling claim for build_coupling_plan(k, l, N), by direct
// application: every l-ball configuration is sent to one result (reached via
// X_0 right after the no-tail prefix), and infinite configurations over the
// sampled base fills agree on their rightmost N balls. Equality among
// results is decided by raw comparison only. Empty `bases` means {1,2,k,l}.
CheckResult verify_theorem_coupling(std::uint64_t k, std::uint64_t l, std::uint64_t n_balls,
                                    std::vector<std::uint64_t> bases = {},
                                    unsigned threads = 1);

// All applicable checks for (k, l): the six lemma/inequality checks when
// k >= 2, plus the coupling theorem at N (default l).
VerificationReport run_all_checks(std::uint64_t k, std::uint64_t l,
                                  std::optional<std::uint64_t> n_balls = std::nullopt,
                                  unsigned threads = 1);

// Lemma checks only (no coupling theorem); needs k >= 2.
VerificationReport run_lemma_checks(std::uint64_t k, std::uint64_t l, unsigned threads = 1);

void to_json(nlohmann::ordered_json& j, const CheckResult& check);
void to_json(nlohmann::ordered_json& j, const VerificationReport& report);

}  // namespace infbin
