#include <doctest.h>

#include <json.hpp>

#include "infbin/coupling.hpp"
#include "infbin/errors.hpp"

using namespace infbin;

TEST_CASE("parameter derivation") {
  const CouplingParams p25 = derive_params(2, 5);
  CHECK(p25.d == 2);
  CHECK(p25.r == 1);
  CHECK(p25.M == 5);

  const CouplingParams p24 = derive_params(2, 4);  // k divides l, so r = k
  CHECK(p24.d == 1);
  CHECK(p24.r == 2);
  CHECK(p24.M == 4);

  const CouplingParams p37 = derive_params(3, 7);
  CHECK(p37.d == 2);
  CHECK(p37.r == 1);
  CHECK(p37.M == 7);

  const CouplingParams p45 = derive_params(4, 5);  // M from k(k-1)/2
  CHECK(p45.d == 1);
  CHECK(p45.r == 1);
  CHECK(p45.M == 6);

  CHECK_THROWS_AS(derive_params(1, 5), InvalidParams);
  CHECK_THROWS_AS(derive_params(3, 3), InvalidParams);
  CHECK_THROWS_AS(derive_params(5, 3), InvalidParams);
}

TEST_CASE("the X and Y families") {
  const CouplingParams p = derive_params(2, 5);
  CHECK(make_X(p, 0) == Configuration::parse("[2,2,1]"));
  CHECK(make_X(p, 1) == Configuration::parse("[1,2,2]"));
  CHECK_THROWS_AS(make_X(p, 2), IndexOutOfRange);

  CHECK(make_Y(5, 0) == Configuration::parse("[5]"));
  CHECK(make_Y(5, 2) == Configuration::parse("[2,3]"));
  CHECK_THROWS_AS(make_Y(5, 5), IndexOutOfRange);

  // one k-move steps the X index down by one, cyclically
  for (std::uint64_t i = 0; i < 2; ++i)
    CHECK(apply_move(make_X(p, i), 2) == make_X(p, (i + 2 - 1) % 2));
  // one l-move steps the Y index down by one, cyclically
  for (std::uint64_t j = 0; j < 5; ++j)
    CHECK(apply_move(make_Y(5, j), 5) == make_Y(5, (j + 5 - 1) % 5));
}

TEST_CASE("the descent map f") {
  const CouplingParams p45 = derive_params(4, 5);
  CHECK(f_map(p45, 0) == 0);
  CHECK(f_map(p45, 1) == 0);
  CHECK(f_map(p45, 2) == 1);
  CHECK(f_map(p45, 3) == 2);

  const CouplingParams p37 = derive_params(3, 7);
  for (std::uint64_t i = 0; i < 3; ++i) CHECK(f_map(p37, i) == 0);
}

TEST_CASE("word builders") {
  const CouplingParams p25 = derive_params(2, 5);
  CHECK(build_psi1(p25) == MoveWord::parse("2^5"));
  CHECK(build_psi(p25) == MoveWord::parse("2 5^4 2^3"));
  CHECK(build_psi2(p25) == MoveWord::parse("2 5^4 2^3"));

  const CouplingParams p37 = derive_params(3, 7);
  CHECK(build_psi1(p37) == MoveWord::parse("3^7"));
  CHECK(build_psi(p37) == MoveWord::parse("3^2 7^5 3^4"));

  // k - r = 0 drops the leading run entirely
  const CouplingParams p24 = derive_params(2, 4);
  CHECK(build_psi(p24) == MoveWord::parse("4^2 2^2"));
}

TEST_CASE("coupling plans") {
  const CouplingPlan plan25 = build_coupling_plan(2, 5, 5);
  CHECK(plan25.word == MoveWord::parse("2^6 5^4 2^3"));
  CHECK(plan25.word.length() == 13);
  CHECK(plan25.psi1_len == 5);
  CHECK(plan25.psi_len == 8);
  CHECK(plan25.tail_len == 0);
  CHECK(plan25.bound == 105);
  CHECK(plan25.target == Configuration::parse("[2,2,1]"));

  const CouplingPlan plan37 = build_coupling_plan(3, 7, 7);
  CHECK(plan37.word.length() == 29);
  CHECK(plan37.bound == 203);

  const CouplingPlan plan246 = build_coupling_plan(2, 4, 6);
  CHECK(plan246.word == MoveWord::parse("2^4 4^2 2^2 4^2"));
  CHECK(plan246.word.length() == 10);
  CHECK(plan246.tail_len == 2);
  CHECK(plan246.target == Configuration::parse("[4]"));

  const CouplingPlan plan124 = build_coupling_plan(1, 2, 4);
  CHECK(plan124.word == MoveWord::parse("1^4"));
  CHECK(plan124.target == Configuration::parse("[1,1,1,1]"));
  CHECK_FALSE(plan124.params.has_value());

  CHECK_THROWS_AS(build_coupling_plan(2, 5, 4), InvalidParams);
  CHECK_THROWS_AS(build_coupling_plan(0, 5, 5), InvalidParams);
  CHECK_THROWS_AS(build_coupling_plan(5, 5, 5), InvalidParams);
}

TEST_CASE("length accounting") {
  const LengthAccounting acc = plan_length_accounting(build_coupling_plan(2, 5, 5));
  CHECK(acc.actual == 13);
  CHECK(acc.closed_form == 17);
  CHECK(acc.bound == 105);
  CHECK(acc.actual <= acc.closed_form);
  CHECK(acc.closed_form < acc.bound);
  CHECK_THROWS_AS(plan_length_accounting(build_coupling_plan(1, 3, 3)), InvalidParams);
}

TEST_CASE("l-moves funnel into the Y cycle at a computable phase") {
  // weighted by bins-to-the-right, [1,1,3] needs exactly one l-move
  Configuration c = Configuration::parse("[1,1,3]");
  c = apply_move(c, 5);
  CHECK(c == make_Y(5, 2));
  // and k-moves carry the Y cycle into the X cycle
  Configuration y = make_Y(5, 0);
  for (int i = 0; i < 3; ++i) y = apply_move(y, 2);
  CHECK(y == make_X(derive_params(2, 5), 0));
}

TEST_CASE("plan serializes with stable keys") {
  nlohmann::ordered_json j;
  to_json(j, build_coupling_plan(2, 5, 5));
  CHECK(j["k"] == 2);
  CHECK(j["l"] == 5);
  CHECK(j["N"] == 5);
  CHECK(j["d"] == 2);
  CHECK(j["r"] == 1);
  CHECK(j["M"] == 5);
  CHECK(j["word"] == "2^6 5^4 2^3");
  CHECK(j["length"] == 13);
  CHECK(j["bound"] == 105);
  CHECK(j["target"] == "[2,2,1]");
  CHECK(j["closed_form_length"] == 17);

  nlohmann::ordered_json j1;
  to_json(j1, build_coupling_plan(1, 3, 3));
  CHECK(j1["M"].is_null());
  CHECK(j1["word"] == "1^3");
}
