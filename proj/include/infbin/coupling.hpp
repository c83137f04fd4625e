#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "infbin/configuration.hpp"
#include "infbin/word.hpp"

namespace infbin {

// Parameters of the two-move coupling construction for move types k < l:
// write l = k*d + r with d >= 1 and 1 <= r <= k (so r = k when k divides l),
// and M = max(l, k(k-1)/2).
struct CouplingParams {
  std::uint64_t k = 0;
  std::uint64_t l = 0;
  std::uint64_t d = 0;
  std::uint64_t r = 0;
  std::uint64_t M = 0;
};

// Requires 2 <= k < l; type 1 needs no parameters (see build_coupling_plan).
CouplingParams derive_params(std::uint64_t k, std::uint64_t l);

// The k distinguished l-ball configurations that absorb the k-move dynamics:
// X_0 = [k,...,k,r] with d bins of k, and for 1 <= i <= k-1 the rotations
// with a partial bin of i on the left. apply_move(X_i, k) == X_{(i-1) mod k}.
Configuration make_X(const CouplingParams& params, std::uint64_t i);

// The at-most-two-bin family cycled by the l-move: Y_0 = [l], Y_j = [j, l-j].
Configuration make_Y(std::uint64_t l, std::uint64_t j);

// Index map describing one Psi pass on the X family: Psi(X_i) = X_{f(i)}.
// f(0) = 0, f(i) < i, f is nondecreasing, and k-1 passes reach 0 from
// every start.
std::uint64_t f_map(const CouplingParams& params, std::uint64_t i);

MoveWord build_psi1(const CouplingParams& params);  // k^M
MoveWord build_psi(const CouplingParams& params);   // k^(k-r) l^(dr + k*d(d-1)/2) k^(l-k)
MoveWord build_psi2(const CouplingParams& params);  // Psi repeated k-1 times

// A coupling plan for ball count N: a fixed word over {k, l} which, applied
// to any configuration with at least l balls (or any infinite one), pins the
// rightmost min(N, l) balls to a single outcome; for N > l the trailing
// l-moves extend the guarantee to the rightmost N balls.
struct CouplingPlan {
  std::uint64_t k = 0;
  std::uint64_t l = 0;
  std::uint64_t n_balls = 0;
  std::optional<CouplingParams> params;  // absent for k == 1
  MoveWord word;
  std::uint64_t psi1_len = 0;
  std::uint64_t psi_len = 0;
  std::uint64_t tail_len = 0;
  std::uint64_t bound = 0;  // N + 4 l^2, strict upper bound on the length
  // The guaranteed l-ball projection after the word: X_0 evolved by the tail
  // (plain X_0 when N <= l). For k == 1 the word is 1^N and the target is
  // N bins of one ball.
  Configuration target{std::vector<std::uint64_t>{1}};
};

CouplingPlan build_coupling_plan(std::uint64_t k, std::uint64_t l, std::uint64_t n_balls);

// Length bookkeeping. `closed_form` is the usual closed-form length of the
// no-tail word plus the tail; its Psi block uses the quadratic term d(d+1)/2
// where the emitted word uses d(d-1)/2, so it overshoots for d > 1. Both are
// reported; only `actual < bound` is asserted.
struct LengthAccounting {
  std::uint64_t actual = 0;
  std::uint64_t closed_form = 0;
  std::uint64_t bound = 0;
};
LengthAccounting plan_length_accounting(const CouplingPlan& plan);

void to_json(nlohmann::ordered_json& j, const CouplingPlan& plan);

}  // namespace infbin
