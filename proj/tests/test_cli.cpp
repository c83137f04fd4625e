#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// runs the binary named by INFBIN_CLI; stderr is dropped
CliResult run_cli(const std::string& args) {
  const char* binary = std::getenv("INFBIN_CLI");
  REQUIRE_MESSAGE(binary != nullptr, "INFBIN_CLI must point at the CLI binary");
  const std::string command = std::string(binary) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

nlohmann::json parse_json(const std::string& text) {
  return nlohmann::json::parse(text);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("apply prints the resulting configuration") {
    const CliResult r = run_cli("apply --config [2,2,1] --word 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "[1,2,2]\n");

    // positional spelling, finite and infinite (base: prefix)
    const CliResult pos = run_cli("apply \"[1,2,2]\" \"2\"");
    CHECK(pos.exit_code == 0);
    CHECK(pos.out == "[2,2,1]\n");
    const CliResult pos2 = run_cli("apply \"[3]\" \"1^2\"");
    CHECK(pos2.exit_code == 0);
    CHECK(pos2.out == "[1,1,1]\n");
    const CliResult pos_inf = run_cli("apply base:2 \"1 1\"");
    CHECK(pos_inf.exit_code == 0);
    CHECK(pos_inf.out == "base:2:[1,1]\n");

    const CliResult j = run_cli("apply --config [2,2,1] --word \"2 2\" --format json");
    CHECK(j.exit_code == 0);
    const auto doc = parse_json(j.out);
    CHECK(doc["input"] == "[2,2,1]");
    CHECK(doc["word"] == "2^2");
    CHECK(doc["result"] == "[2,2,1]");

    const CliResult inf =
        run_cli("apply --infinite base:2 --word \"1 1\" --format json");
    CHECK(inf.exit_code == 0);
    const auto infdoc = parse_json(inf.out);
    CHECK(infdoc["result"] == "base:2:[1,1]");
    CHECK(infdoc["new_bins"] == 2);
  }

  TEST_CASE("apply maps failures to exit codes") {
    CHECK(run_cli("apply --config [2,2,1]").exit_code == 2);       // missing word
    CHECK(run_cli("apply --word 2").exit_code == 2);               // no configuration
    CHECK(run_cli("apply --config [0] --word 1").exit_code == 2);  // parse error
    CHECK(run_cli("apply --config [2,2,1] --word 6").exit_code == 3);
    CHECK(run_cli("apply \"[2,1]\" 7").exit_code == 3);  // move wants a 7th ball
    CHECK(run_cli("apply --config [2,1] --infinite base:1 --word 1").exit_code == 2);
  }

  TEST_CASE("construct emits the plan") {
    const CliResult r = run_cli("construct --k 2 --l 5");
    CHECK(r.exit_code == 0);
    const auto doc = parse_json(r.out);
    CHECK(doc["word"] == "2^6 5^4 2^3");
    CHECK(doc["length"] == 13);
    CHECK(doc["target"] == "[2,2,1]");
    CHECK(doc["bound"] == 105);
    CHECK(doc["closed_form_length"] == 17);

    // short-flag spelling gives the identical plan
    const CliResult s = run_cli("construct -k 2 -l 5 -N 5");
    CHECK(s.exit_code == 0);
    CHECK(s.out == r.out);
    const CliResult unit = run_cli("construct -k 1 -l 2 -N 4");
    CHECK(unit.exit_code == 0);
    CHECK(parse_json(unit.out)["word"] == "1^4");

    CHECK(run_cli("construct --k 5 --l 2").exit_code == 2);
    CHECK(run_cli("construct -k 5 -l 3 -N 1").exit_code == 2);
    CHECK(run_cli("construct --k 2 --l 5 --n 4").exit_code == 2);
  }

  TEST_CASE("verify reports every check and a global verdict") {
    const CliResult r = run_cli("verify --k 2 --l 5");
    CHECK(r.exit_code == 0);
    const auto doc = parse_json(r.out);
    CHECK(doc["all_pass"] == true);
    CHECK(doc["checks"].size() == 7);
    CHECK_FALSE(doc.contains("elapsed_ms"));

    // short flags are aliases for the same run
    const CliResult s = run_cli("verify -k 2 -l 5");
    CHECK(s.exit_code == 0);
    CHECK(s.out == r.out);

    const CliResult timed = run_cli("verify --k 2 --l 5 --timings");
    CHECK(parse_json(timed.out).contains("elapsed_ms"));
  }

  TEST_CASE("verify output is byte-stable across thread counts") {
    const CliResult a = run_cli("verify --k 2 --l 6 --threads 1");
    const CliResult b = run_cli("verify --k 2 --l 6 --threads 4");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("lemma sweeps emit one json line per pair") {
    const CliResult r = run_cli("lemmas --sweep-l-max 4");
    CHECK(r.exit_code == 0);
    std::size_t lines = 0;
    std::size_t pos = 0;
    while ((pos = r.out.find('\n', pos)) != std::string::npos) {
      ++lines;
      ++pos;
    }
    CHECK(lines == 3);  // (2,3), (2,4), (3,4)
    const auto first = parse_json(r.out.substr(0, r.out.find('\n')));
    CHECK(first["k"] == 2);
    CHECK(first["l"] == 3);
    CHECK(first["all_pass"] == true);

    CHECK(run_cli("lemmas").exit_code == 2);
  }

  TEST_CASE("sync searches and checks words") {
    const CliResult r = run_cli("sync --l 3 --alphabet 1");
    CHECK(r.exit_code == 0);
    const auto doc = parse_json(r.out);
    CHECK(doc["word"] == "1^2");
    CHECK(doc["length"] == 2);
    CHECK(doc["terminal"] == "[1,1,1]");
    CHECK(doc["optimal"] == true);

    CHECK(run_cli("sync --l 3 --alphabet 3").exit_code == 3);
    CHECK(run_cli("sync --l 6 --alphabet 1,2").exit_code == 4);
    CHECK(run_cli("sync --l 3 --alphabet 4").exit_code == 3);

    const CliResult check = run_cli("sync --l 3 --check-word \"1 1\"");
    CHECK(check.exit_code == 0);
    CHECK(parse_json(check.out)["synchronizes"] == true);

    const CliResult nosync = run_cli("sync --l 3 --check-word 3");
    CHECK(nosync.exit_code == 0);
    CHECK(parse_json(nosync.out)["synchronizes"] == false);

    const CliResult greedy = run_cli("sync --l 6 --alphabet 1,2 --greedy");
    CHECK(greedy.exit_code == 0);
    CHECK(parse_json(greedy.out)["method"] == "greedy");
  }

  TEST_CASE("sync short flags and method toggles") {
    const CliResult exact = run_cli("sync -l 3 -a 1 --exact");
    CHECK(exact.exit_code == 0);
    const auto doc = parse_json(exact.out);
    CHECK(doc["length"] == 2);
    CHECK(doc["optimal"] == true);

    const CliResult greedy = run_cli("sync -l 5 -a 2,5 --greedy");
    CHECK(greedy.exit_code == 0);
    const auto gdoc = parse_json(greedy.out);
    CHECK(gdoc["method"] == "greedy");
    CHECK(gdoc["optimal"] == false);
    // the heuristic word must really synchronize
    const std::string word = gdoc["word"].get<std::string>();
    const CliResult check = run_cli("sync -l 5 --check-word \"" + word + "\"");
    CHECK(parse_json(check.out)["synchronizes"] == true);

    CHECK(run_cli("sync -l 3 -a 1 --exact --greedy").exit_code == 2);
  }

  TEST_CASE("simulate emits json reports and csv streams") {
    const CliResult r = run_cli("simulate --dist det:1 --steps 10 --seed 1");
    CHECK(r.exit_code == 0);
    const auto doc = parse_json(r.out);
    CHECK(doc["frontSpeedEstimate"] == 1.0);
    CHECK(doc["binsCreated"] == 10);
    CHECK(doc["period"]["period"] == 1);
    CHECK(doc["frontSpeedPostBurnIn"].is_null());  // run shorter than burn-in
    CHECK(doc["regenerationTimes"].is_array());
    CHECK(doc["regenerationTimes"].empty());  // no watch word

    // short-flag spelling
    const CliResult s = run_cli("simulate -d det:1 -n 1000 -s 42");
    CHECK(s.exit_code == 0);
    CHECK(parse_json(s.out)["frontSpeedEstimate"] == 1.0);

    const CliResult csv = run_cli("simulate --dist det:1 --steps 3 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out ==
          "step,binsCreated,topBinVector\n"
          "1,1,\"[1,1]\"\n2,2,\"[1,1]\"\n3,3,\"[1,1]\"\n");

    CHECK(run_cli("simulate --dist det:0 --steps 3").exit_code == 3);
    CHECK(run_cli("simulate --dist nope --steps 3").exit_code == 3);
    CHECK(run_cli("simulate --dist det:1 --steps 3 --watch 2").exit_code == 2);
  }

  TEST_CASE("simulate watch mode reports regenerations") {
    const CliResult r = run_cli(
        "simulate --dist unif:2,5 --steps 60000 --seed 5 --watch 2,5");
    CHECK(r.exit_code == 0);
    const auto doc = parse_json(r.out);
    CHECK(doc["watch"]["word"] == "2^6 5^4 2^3");
    CHECK(doc["watch"]["projectionMismatches"] == 0);
    REQUIRE(doc["regenerationTimes"].is_array());
    CHECK_FALSE(doc["regenerationTimes"].empty());
    CHECK(doc["regenerationTimes"].size() == doc["watch"]["occurrences"]);
    // regeneration-time samples populate the top-pattern histogram
    REQUIRE(doc["topBinHistogram"].is_object());
    std::uint64_t sampled = 0;
    for (const auto& count : doc["topBinHistogram"]) sampled += count.get<std::uint64_t>();
    CHECK(sampled == doc["watch"]["occurrences"]);
  }

  TEST_CASE("simulate two-chain and stationary modes") {
    const CliResult two = run_cli(
        "simulate --dist unif:2,5 --steps 100000 --seed 2 "
        "--two-chain base:1 base:3 --watch 2,5");
    CHECK(two.exit_code == 0);
    const auto doc = parse_json(two.out);
    CHECK(doc["initialA"] == "base:1");
    CHECK(doc["initialB"] == "base:3");
    CHECK(doc["projectionMismatches"] == 0);
    CHECK(doc["agreed"] == true);

    const CliResult stat = run_cli(
        "simulate --dist unif:2,5 --steps 2000 --seed 7 --stationary --replicas 6");
    CHECK(stat.exit_code == 0);
    const auto sdoc = parse_json(stat.out);
    CHECK(sdoc["replicas"] == 6);
    CHECK(sdoc["cells"].is_array());

    CHECK(run_cli("simulate --dist det:2 --steps 100 --stationary").exit_code == 3);
    CHECK(run_cli("simulate --dist unif:2,5 --steps 10 --stationary --two-chain")
              .exit_code == 2);
  }

  TEST_CASE("couple2 sweeps seeds and reports a TV decay series") {
    const CliResult r = run_cli(
        "couple2 --k 2 --l 5 --dist unif:2,5 --steps 100000 --seeds 1,2");
    CHECK(r.exit_code == 0);
    const auto doc = parse_json(r.out);
    REQUIRE(doc.is_object());
    REQUIRE(doc["runs"].size() == 2);
    for (const auto& run : doc["runs"]) {
      CHECK(run["projectionMismatches"] == 0);
      CHECK(run["agreed"] == true);
      CHECK(run["coupledByWatch"] == true);
    }
    REQUIRE(doc["tvDistanceSeries"].is_array());
    REQUIRE_FALSE(doc["tvDistanceSeries"].empty());
    CHECK(doc["tvDistanceSeries"].front()["step"] == 1);
    CHECK(doc["tvDistanceSeries"].front()["tv"] == 1.0);
    CHECK(doc["tvDistanceSeries"].back()["step"] == 100000);
    CHECK(doc["tvDistanceSeries"].back()["tv"] == 0.0);
  }

  TEST_CASE("usage errors and help") {
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("simulate --help").exit_code == 0);
    CHECK(run_cli("").exit_code == 2);  // a subcommand is required
  }
}
