#include "infbin/coupling.hpp"

#include <algorithm>

namespace infbin {

CouplingParams derive_params(std::uint64_t k, std::uint64_t l) {
  if (k < 2) throw InvalidParams("coupling parameters need k >= 2");
  if (k >= l) throw InvalidParams("coupling parameters need k < l");
  std::uint64_t r = l % k;
  std::uint64_t d = l / k;
  if (r == 0) {
    r = k;
    d -= 1;
  }
  const std::uint64_t M = std::max(l, k * (k - 1) / 2);
  return {k, l, d, r, M};
}

Configuration make_X(const CouplingParams& p, std::uint64_t i) {
  if (i >= p.k)
    throw IndexOutOfRange("X index " + std::to_string(i) + " out of range for k = " +
                          std::to_string(p.k));
  std::vector<std::uint64_t> bins;
  if (i == 0) {
    bins.assign(p.d, p.k);
    bins.push_back(p.r);
  } else if (i < p.r) {
    bins.push_back(i);
    bins.insert(bins.end(), p.d, p.k);
    bins.push_back(p.r - i);
  } else {
    bins.push_back(i);
    bins.insert(bins.end(), p.d - 1, p.k);
    bins.push_back(p.k + p.r - i);
  }
  return Configuration(std::move(bins));
}

Configuration make_Y(std::uint64_t l, std::uint64_t j) {
  if (l == 0) throw InvalidParams("Y family needs l >= 1");
  if (j >= l)
    throw IndexOutOfRange("Y index " + std::to_string(j) + " out of range for l = " +
                          std::to_string(l));
  if (j == 0) return Configuration({l});
  return Configuration({j, l - j});
}

std::uint64_t f_map(const CouplingParams& p, std::uint64_t i) {
  if (i >= p.k)
    throw IndexOutOfRange("f index " + std::to_string(i) + " out of range for k = " +
                          std::to_string(p.k));
  const std::int64_t k = static_cast<std::int64_t>(p.k);
  const std::int64_t l = static_cast<std::int64_t>(p.l);
  const std::int64_t d = static_cast<std::int64_t>(p.d);
  const std::int64_t r = static_cast<std::int64_t>(p.r);
  const std::int64_t ii = static_cast<std::int64_t>(i);
  const std::int64_t v = ii <= k - r - 1 ? k - l + d * ii : k - (d + 1) * (k - ii);
  return v > 0 ? static_cast<std::uint64_t>(v) : 0;
}

MoveWord build_psi1(const CouplingParams& p) {
  MoveWord w;
  w.append_run(p.k, p.M);
  return w;
}

MoveWord build_psi(const CouplingParams& p) {
  MoveWord w;
  w.append_run(p.k, p.k - p.r);  // empty when k divides l
  w.append_run(p.l, p.d * p.r + p.k * p.d * (p.d - 1) / 2);
  w.append_run(p.k, p.l - p.k);
  return w;
}

MoveWord build_psi2(const CouplingParams& p) {
  MoveWord w;
  const MoveWord psi = build_psi(p);
  for (std::uint64_t i = 0; i + 1 < p.k; ++i) w.append_word(psi);
  return w;
}

CouplingPlan build_coupling_plan(std::uint64_t k, std::uint64_t l, std::uint64_t n_balls) {
  if (k == 0 || n_balls == 0) throw InvalidParams("plan needs k >= 1 and N >= 1");
  if (k >= l) throw InvalidParams("plan needs k < l");
  if (n_balls < l) throw InvalidParams("plan needs N >= l");
  CouplingPlan plan;
  plan.k = k;
  plan.l = l;
  plan.n_balls = n_balls;
  plan.bound = n_balls + 4 * l * l;

  if (k == 1) {
    // type-1 moves each open a fresh rightmost bin, so 1^N pins the top N
    // balls outright
    plan.word.append_run(1, n_balls);
    plan.psi1_len = 0;
    plan.psi_len = 0;
    plan.tail_len = n_balls;
    plan.target = Configuration(std::vector<std::uint64_t>(n_balls, 1));
  } else {
    const CouplingParams p = derive_params(k, l);
    plan.params = p;
    const MoveWord psi = build_psi(p);
    plan.word = build_psi1(p);
    plan.psi1_len = plan.word.length();
    plan.psi_len = psi.length();
    for (std::uint64_t i = 0; i + 1 < k; ++i) plan.word.append_word(psi);
    plan.tail_len = n_balls > l ? n_balls - l : 0;
    plan.target = make_X(p, 0);
    if (plan.tail_len > 0) {
      plan.word.append_run(l, plan.tail_len);
      for (std::uint64_t t = 0; t < plan.tail_len; ++t)
        plan.target = apply_move(plan.target, l);
    }
  }

  const std::uint64_t expect =
      plan.psi1_len + (k > 1 ? (k - 1) * plan.psi_len : 0) + plan.tail_len;
  if (plan.word.length() != expect)
    throw std::logic_error("plan length bookkeeping out of step");
  if (plan.word.length() >= plan.bound)
    throw DomainError("plan word of length " + std::to_string(plan.word.length()) +
                      " breaks the advertised bound " + std::to_string(plan.bound));
  return plan;
}

LengthAccounting plan_length_accounting(const CouplingPlan& plan) {
  if (!plan.params) throw InvalidParams("length accounting needs k >= 2");
  const CouplingParams& p = *plan.params;
  LengthAccounting acc;
  acc.actual = plan.word.length();
  acc.closed_form =
      std::max(p.l, p.k * (p.k - 1) / 2) +
      (p.k - 1) * (p.k - p.r + p.d * p.r + p.k * p.d * (p.d + 1) / 2 + p.l - p.k) +
      plan.tail_len;
  acc.bound = plan.bound;
  if (acc.actual >= acc.bound)
    throw DomainError("plan length " + std::to_string(acc.actual) +
                      " breaks the bound " + std::to_string(acc.bound));
  return acc;
}

void to_json(nlohmann::ordered_json& j, const CouplingPlan& plan) {
  j = nlohmann::ordered_json{
      {"k", plan.k},
      {"l", plan.l},
      {"N", plan.n_balls},
      {"d", plan.params ? nlohmann::ordered_json(plan.params->d) : nullptr},
      {"r", plan.params ? nlohmann::ordered_json(plan.params->r) : nullptr},
      {"M", plan.params ? nlohmann::ordered_json(plan.params->M) : nullptr},
      {"word", plan.word.to_string()},
      {"length", plan.word.length()},
      {"psi1_len", plan.psi1_len},
      {"psi_len", plan.psi_len},
      {"tail_len", plan.tail_len},
      {"bound", plan.bound},
      {"target", plan.target.to_string()},
  };
  if (plan.params) {
    const LengthAccounting acc = plan_length_accounting(plan);
    j["closed_form_length"] = acc.closed_form;
  }
}

}  // namespace infbin
