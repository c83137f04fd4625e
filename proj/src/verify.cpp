#include "infbin/verify.hpp"

#include <algorithm>
#include <chrono>

namespace infbin {

namespace {

CheckResult from_sweep(std::string name, std::optional<SweepFailure> failure) {
  CheckResult res;
  res.name = std::move(name);
  res.pass = !failure.has_value();
  if (failure)
    res.counterexample =
        "mask " + std::to_string(failure->mask) + ": " + failure->details;
  return res;
}

// weighted ball distance of a projection [i_1,...,i_p]: sum (p-j) i_j
std::uint64_t weighted_distance(const std::vector<std::uint64_t>& proj) {
  const std::size_t p = proj.size();
  std::uint64_t w = 0;
  for (std::size_t j = 1; j < p; ++j)
    w += static_cast<std::uint64_t>(p - j) * proj[j - 1];
  return w;
}

}  // namespace

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

CheckResult verify_lemma_kcycle(const CouplingParams& params, unsigned threads) {
  std::vector<Configuration> family;
  for (std::uint64_t i = 0; i < params.k; ++i) family.push_back(make_X(params, i));
  const MoveWord psi1 = build_psi1(params);
  auto failure = sweep_compositions(
      params.l, threads,
      [&](std::uint64_t, const Configuration& x) -> std::optional<std::string> {
        const Configuration y = apply_word(x, psi1);
        for (const Configuration& member : family)
          if (y == member) return std::nullopt;
        return "k^M lands outside the X family: " + x.to_string() + " -> " +
               y.to_string();
      });
  return from_sweep("kcycle", std::move(failure));
}

CheckResult verify_lemma_psiaction(const CouplingParams& params) {
  CheckResult res;
  res.name = "psiaction";
  res.pass = true;
  const MoveWord psi = build_psi(params);
  for (std::uint64_t i = 0; i < params.k; ++i) {
    const Configuration got = apply_word(make_X(params, i), psi);
    const Configuration want = make_X(params, f_map(params, i));
    if (got != want) {
      res.pass = false;
      res.counterexample = "Psi(X_" + std::to_string(i) + ") = " + got.to_string() +
                           ", expected " + want.to_string();
      return res;
    }
  }
  return res;
}

CheckResult verify_lemma_fproperties(const CouplingParams& params) {
  CheckResult res;
  res.name = "fproperties";
  res.pass = true;
  auto fail = [&](std::string why) {
    res.pass = false;
    res.counterexample = std::move(why);
  };
  if (f_map(params, 0) != 0) {
    fail("f(0) = " + std::to_string(f_map(params, 0)));
    return res;
  }
  for (std::uint64_t i = 1; i < params.k; ++i) {
    if (f_map(params, i) >= i) {
      fail("f(" + std::to_string(i) + ") = " + std::to_string(f_map(params, i)) +
           " is not below its argument");
      return res;
    }
    if (f_map(params, i) < f_map(params, i - 1)) {
      fail("f decreases between " + std::to_string(i - 1) + " and " + std::to_string(i));
      return res;
    }
  }
  for (std::uint64_t i = 0; i < params.k; ++i) {
    std::uint64_t v = i;
    for (std::uint64_t step = 0; step + 1 < params.k; ++step) v = f_map(params, v);
    if (v != 0) {
      fail("f^(k-1)(" + std::to_string(i) + ") = " + std::to_string(v));
      return res;
    }
  }
  return res;
}

CheckResult verify_lemma_klaction(const CouplingParams& params, unsigned threads) {
  // part 2 first: the k-move bridge from the Y family into the X family
  for (std::uint64_t j = 0; j < params.l; ++j) {
    Configuration cur = make_Y(params.l, j);
    for (std::uint64_t t = 0; t < params.l - params.k; ++t)
      cur = apply_move(cur, params.k);
    const std::int64_t idx = static_cast<std::int64_t>(params.k) -
                             static_cast<std::int64_t>(params.l) +
                             static_cast<std::int64_t>(j);
    const Configuration want = make_X(params, idx > 0 ? static_cast<std::uint64_t>(idx) : 0);
    if (cur != want) {
      CheckResult res;
      res.name = "klaction";
      res.pass = false;
      res.counterexample = "part 2, Y_" + std::to_string(j) + ": got " + cur.to_string() +
                           ", expected " + want.to_string();
      return res;
    }
  }
  // part 1: l-moves collapse any configuration onto the Y cycle at a known phase
  const std::uint64_t l = params.l;
  auto failure = sweep_compositions(
      l, threads,
      [&](std::uint64_t, const Configuration& x) -> std::optional<std::string> {
        const auto& bins = x.bins();
        const std::size_t p = bins.size();
        std::uint64_t n = 0;
        for (std::size_t j = 1; j + 1 < p; ++j)
          n += static_cast<std::uint64_t>(p - 1 - j) * bins[j - 1];
        std::vector<std::uint64_t> cur = bins;
        for (std::uint64_t t = 0; t < n; ++t) detail::apply_move_raw(cur, l);
        const Configuration got(std::move(cur));
        const Configuration want = make_Y(l, l - bins.back());
        if (got != want)
          return "part 1, " + x.to_string() + " after " + std::to_string(n) +
                 " l-moves: got " + got.to_string() + ", expected " + want.to_string();
        return std::nullopt;
      });
  return from_sweep("klaction", std::move(failure));
}

CheckResult verify_weighted_distance(const CouplingParams& params, unsigned threads) {
  const std::uint64_t cap = params.k * (params.k - 1) / 2;
  auto failure = sweep_compositions(
      params.l, threads,
      [&](std::uint64_t, const Configuration& x) -> std::optional<std::string> {
        const Configuration pk = project(x, params.k);
        const std::uint64_t w = weighted_distance(pk.bins());
        if (w > cap)
          return "weighted distance " + std::to_string(w) + " of " + x.to_string() +
                 " exceeds " + std::to_string(cap);
        const bool all_ones =
            pk.bin_count() == params.k &&
            std::all_of(pk.bins().begin(), pk.bins().end(),
                        [](std::uint64_t b) { return b == 1; });
        if ((w == cap) != all_ones)
          return "equality case mismatch for " + x.to_string() + " (distance " +
                 std::to_string(w) + ")";
        return std::nullopt;
      });
  return from_sweep("weighted_distance", std::move(failure));
}

CheckResult verify_rightmost_fill(const CouplingParams& params, unsigned threads) {
  auto failure = sweep_compositions(
      params.l, threads,
      [&](std::uint64_t, const Configuration& x) -> std::optional<std::string> {
        const Configuration pk = project(x, params.k);
        const std::uint64_t n = weighted_distance(pk.bins());
        if (x.rightmost() >= params.k) {
          if (n != 0)
            return "nonzero distance despite a full rightmost bin: " + x.to_string();
          return std::nullopt;
        }
        // follow the bin that starts out rightmost through n k-moves
        std::vector<std::uint64_t> bins = x.bins();
        std::int64_t pos = static_cast<std::int64_t>(bins.size()) - 1;
        for (std::uint64_t t = 0; t < n; ++t) {
          const bool drops = bins.front() == 1;
          detail::apply_move_raw(bins, params.k);
          if (drops) --pos;
          if (pos < 0)
            return "original rightmost bin of " + x.to_string() + " was deleted";
        }
        if (bins[static_cast<std::size_t>(pos)] != params.k)
          return "rightmost bin of " + x.to_string() + " holds " +
                 std::to_string(bins[static_cast<std::size_t>(pos)]) + " after " +
                 std::to_string(n) + " k-moves, expected " + std::to_string(params.k);
        return std::nullopt;
      });
  return from_sweep("rightmost_fill", std::move(failure));
}

CheckResult verify_theorem_coupling(std::uint64_t k, std::uint64_t l, std::uint64_t n_balls,
                                    std::vector<std::uint64_t> bases, unsigned threads) {
  const CouplingPlan plan = build_coupling_plan(k, l, n_balls);
  if (bases.empty()) bases = {1, 2, k, l};
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  const std::uint64_t m = std::min(n_balls, l);

  // finite, exhaustive: everything must collapse to the result at mask 0
  const Configuration ref = apply_word(composition_from_mask(l, 0), plan.word);
  std::optional<MoveWord> prefix;
  std::optional<Configuration> checkpoint;
  MoveWord tail;
  if (k >= 2) {
    prefix = build_psi1(*plan.params);
    prefix->append_word(build_psi2(*plan.params));
    checkpoint = make_X(*plan.params, 0);
    if (plan.tail_len > 0) tail.append_run(l, plan.tail_len);
  }
  auto failure = sweep_compositions(
      l, threads,
      [&](std::uint64_t, const Configuration& x) -> std::optional<std::string> {
        if (k >= 2) {
          const Configuration mid = apply_word(x, *prefix);
          if (mid != *checkpoint)
            return "prefix sends " + x.to_string() + " to " + mid.to_string() +
                   ", not to the checkpoint " + checkpoint->to_string();
          const Configuration full = plan.tail_len > 0 ? apply_word(mid, tail) : mid;
          if (full != ref)
            return "results diverge: " + x.to_string() + " -> " + full.to_string() +
                   " vs " + ref.to_string();
          if (full != plan.target)
            return "result " + full.to_string() + " differs from the plan target " +
                   plan.target.to_string();
        } else {
          const Configuration full = apply_word(x, plan.word);
          if (project(full, m) != project(ref, m))
            return "projections diverge: " + x.to_string() + " -> " +
                   project(full, m).to_string();
          if (project(full, m) != project(plan.target, m))
            return "projection of " + x.to_string() +
                   " differs from the plan target's";
        }
        return std::nullopt;
      });
  if (failure) return from_sweep("theorem_coupling", std::move(failure));

  // infinite: the same word over each base fill must pin the top N balls
  const LazyInfiniteConfiguration seed(bases.front(),
                                       composition_from_mask(l, 0).bins());
  const Configuration ref_top = project(apply_word(seed, plan.word), n_balls);
  for (std::uint64_t base : bases) {
    auto lazy_failure = sweep_compositions(
        l, threads,
        [&](std::uint64_t, const Configuration& x) -> std::optional<std::string> {
          const LazyInfiniteConfiguration out =
              apply_word(LazyInfiniteConfiguration(base, x.bins()), plan.word);
          const Configuration top = project(out, n_balls);
          if (top != ref_top)
            return "base " + std::to_string(base) + ", window " + x.to_string() +
                   ": top balls " + top.to_string() + " vs " + ref_top.to_string();
          const Configuration tgt = k >= 2 ? project(out, l) : top;
          if (tgt != plan.target)
            return "base " + std::to_string(base) + ", window " + x.to_string() +
                   ": guaranteed projection " + tgt.to_string() +
                   " differs from the plan target " + plan.target.to_string();
          return std::nullopt;
        });
    if (lazy_failure) return from_sweep("theorem_coupling", std::move(lazy_failure));
  }
  CheckResult res;
  res.name = "theorem_coupling";
  res.pass = true;
  return res;
}

namespace {

VerificationReport timed_report(std::uint64_t k, std::uint64_t l,
                                std::optional<std::uint64_t> n_balls, unsigned threads,
                                bool with_theorem) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.k = k;
  report.l = l;
  report.universe = universe_size(l);
  if (k == 0 || k >= l) throw InvalidParams("checks need 1 <= k < l");
  if (k >= 2) {
    const CouplingParams params = derive_params(k, l);
    report.checks.push_back(verify_lemma_kcycle(params, threads));
    report.checks.push_back(verify_lemma_psiaction(params));
    report.checks.push_back(verify_lemma_fproperties(params));
    report.checks.push_back(verify_lemma_klaction(params, threads));
    report.checks.push_back(verify_weighted_distance(params, threads));
    report.checks.push_back(verify_rightmost_fill(params, threads));
  }
  if (with_theorem) {
    report.n_balls = n_balls.value_or(l);
    report.checks.push_back(verify_theorem_coupling(k, l, *report.n_balls, {}, threads));
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

}  // namespace

VerificationReport run_all_checks(std::uint64_t k, std::uint64_t l,
                                  std::optional<std::uint64_t> n_balls, unsigned threads) {
  return timed_report(k, l, n_balls, threads, true);
}

VerificationReport run_lemma_checks(std::uint64_t k, std::uint64_t l, unsigned threads) {
  if (k < 2) throw InvalidParams("lemma checks need k >= 2");
  return timed_report(k, l, std::nullopt, threads, false);
}

void to_json(nlohmann::ordered_json& j, const CheckResult& check) {
  j = nlohmann::ordered_json{
      {"name", check.name},
      {"pass", check.pass},
      {"counterexample",
       check.counterexample ? nlohmann::ordered_json(*check.counterexample) : nullptr},
  };
}

void to_json(nlohmann::ordered_json& j, const VerificationReport& report) {
  j = nlohmann::ordered_json{
      {"k", report.k},
      {"l", report.l},
      {"N", report.n_balls ? nlohmann::ordered_json(*report.n_balls) : nullptr},
      {"universe", report.universe},
      {"all_pass", report.all_pass()},
      {"elapsed_ms", report.elapsed_ms},
  };
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::ordered_json cj;
    to_json(cj, c);
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
}

}  // namespace infbin
