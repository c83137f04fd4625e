#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "infbin/automaton.hpp"
#include "infbin/configuration.hpp"
#include "infbin/coupling.hpp"
#include "infbin/enumeration.hpp"
#include "infbin/errors.hpp"
#include "infbin/parallel.hpp"
#include "infbin/simulate.hpp"
#include "infbin/verify.hpp"
#include "infbin/word.hpp"

namespace {

using nlohmann::ordered_json;

// "text" renders top-level fields as key: value lines; everything else is JSON
void emit(const ordered_json& j, const std::string& format) {
  if (format == "text") {
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::cout << it.key() << ": ";
      if (it->is_string())
        std::cout << it->get<std::string>();
      else
        std::cout << it->dump();
      std::cout << "\n";
    }
    return;
  }
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"infinite-bin model: moves, couplings, synchronization, simulation"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = auto)")
      ->capture_default_str();

  // apply
  auto* apply_cmd = app.add_subcommand("apply", "apply a move word to a configuration");
  apply_cmd->fallthrough();
  std::string apply_config, apply_infinite, apply_word_text, apply_format = "text";
  std::string apply_pos_config, apply_pos_word;
  apply_cmd->add_option("CONFIG", apply_pos_config,
                        "configuration text, e.g. [2,2,1] or base:2:[2,1]");
  apply_cmd->add_option("WORD", apply_pos_word, "move word, e.g. \"2 5^3 1\"");
  auto* apply_cfg_opt =
      apply_cmd->add_option("--config", apply_config, "finite configuration, e.g. [2,2,1]");
  auto* apply_inf_opt = apply_cmd->add_option("--infinite", apply_infinite,
                                              "infinite configuration, e.g. base:2:[2,1]");
  apply_cfg_opt->excludes(apply_inf_opt);
  apply_inf_opt->excludes(apply_cfg_opt);
  apply_cmd->add_option("--word", apply_word_text, "move word, e.g. \"2 5^3 1\"");
  apply_cmd->add_option("--format", apply_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // construct
  auto* construct_cmd =
      app.add_subcommand("construct", "build the coupling word for (k, l) and N balls");
  construct_cmd->fallthrough();
  std::uint64_t con_k = 0, con_l = 0, con_n = 0;
  construct_cmd->add_option("-k,--k", con_k, "move type the word mostly uses")->required();
  construct_cmd->add_option("-l,--l", con_l, "ball count the word must control")->required();
  auto* con_n_opt = construct_cmd->add_option("-N,--N,--n", con_n, "balls to pin (default l)");
  std::string con_format = "json";
  construct_cmd->add_option("--format", con_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "exhaustively check the coupling and its ingredients");
  verify_cmd->fallthrough();
  std::uint64_t ver_k = 0, ver_l = 0, ver_n = 0;
  verify_cmd->add_option("-k,--k", ver_k)->required();
  verify_cmd->add_option("-l,--l", ver_l)->required();
  auto* ver_n_opt = verify_cmd->add_option("-N,--N,--n", ver_n, "balls to pin (default l)");
  bool ver_timings = false;
  verify_cmd->add_flag("--timings", ver_timings, "include wall-clock timing in the output");
  std::string ver_format = "json";
  verify_cmd->add_option("--format", ver_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  // lemmas
  auto* lemmas_cmd =
      app.add_subcommand("lemmas", "run the structural checks behind the coupling");
  lemmas_cmd->fallthrough();
  std::uint64_t lem_k = 0, lem_l = 0, lem_sweep = 0;
  auto* lem_k_opt = lemmas_cmd->add_option("-k,--k", lem_k);
  auto* lem_l_opt = lemmas_cmd->add_option("-l,--l", lem_l);
  auto* lem_sweep_opt = lemmas_cmd->add_option(
      "--sweep-l-max", lem_sweep, "check every 2 <= k < l up to this l, one JSON line each");
  lem_sweep_opt->excludes(lem_k_opt)->excludes(lem_l_opt);
  bool lem_timings = false;
  lemmas_cmd->add_flag("--timings", lem_timings, "include wall-clock timing in the output");

  // sync
  auto* sync_cmd =
      app.add_subcommand("sync", "synchronizing words for the fixed-ball-count automaton");
  sync_cmd->fallthrough();
  std::uint64_t sync_l = 0;
  sync_cmd->add_option("-l,--l", sync_l, "ball count")->required();
  std::vector<std::uint64_t> sync_alphabet;
  sync_cmd->add_option("-a,--alphabet", sync_alphabet, "move types, e.g. 1,2")->delimiter(',');
  std::string sync_check_word, sync_format = "json";
  bool sync_exact = false, sync_greedy = false;
  auto* sync_exact_flag =
      sync_cmd->add_flag("--exact", sync_exact, "shortest word by subset search (default)");
  auto* sync_greedy_flag =
      sync_cmd->add_flag("--greedy", sync_greedy, "fast merging heuristic, may be longer");
  sync_exact_flag->excludes(sync_greedy_flag);
  sync_greedy_flag->excludes(sync_exact_flag);
  std::uint64_t sync_max_subsets = std::uint64_t{1} << 22;
  sync_cmd->add_option("--max-subsets", sync_max_subsets,
                       "subset-search cap for the exact method")
      ->capture_default_str();
  sync_cmd->add_option("--check-word", sync_check_word,
                       "instead of searching, test whether this word synchronizes");
  sync_cmd->add_option("--format", sync_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run the seeded Markov chain");
  sim_cmd->fallthrough();
  std::string sim_dist_text, sim_init_text = "base:1", sim_init_b_text = "base:3";
  std::string sim_format = "json";
  std::uint64_t sim_steps = 0, sim_seed = 0;
  std::uint64_t sim_depth = 2, sim_replicas = 20, sim_regen_cap = 10000,
                sim_period_cap = 10000;
  bool sim_stationary = false;
  std::vector<std::uint64_t> sim_watch_pair;
  std::vector<std::string> sim_two_inits;
  sim_cmd->add_option("-d,--dist", sim_dist_text, "move distribution, e.g. unif:2,5")
      ->required();
  sim_cmd->add_option("--init", sim_init_text, "initial configuration")->capture_default_str();
  sim_cmd->add_option("-n,--steps", sim_steps, "number of moves")->required();
  sim_cmd->add_option("-s,--seed", sim_seed)->capture_default_str();
  auto* sim_watch_opt =
      sim_cmd->add_option("--watch", sim_watch_pair, "watch the (k,l) coupling word, e.g. 2,5")
          ->delimiter(',')
          ->expected(2);
  sim_cmd->add_option("--regen-cap", sim_regen_cap, "max recorded regeneration steps")
      ->capture_default_str();
  sim_cmd->add_option("--period-cap", sim_period_cap, "largest period tried for det chains")
      ->capture_default_str();
  auto* sim_stat_flag = sim_cmd->add_flag("--stationary", sim_stationary,
                                          "compare empirical stationary laws of two initials");
  auto* sim_two_opt =
      sim_cmd->add_option("--two-chain", sim_two_inits,
                          "couple two initials through shared noise, e.g. base:1 base:3")
          ->expected(0, 2);
  sim_stat_flag->excludes(sim_two_opt);
  sim_two_opt->excludes(sim_stat_flag);
  sim_cmd->add_option("--init-b", sim_init_b_text, "second initial configuration")
      ->capture_default_str();
  sim_cmd->add_option("--depth", sim_depth, "bins per sampled top pattern")
      ->capture_default_str();
  sim_cmd->add_option("--replicas", sim_replicas, "chains per initial")->capture_default_str();
  sim_cmd->add_option("--format", sim_format, "json, text, or csv (single chain only)")
      ->check(CLI::IsMember({"json", "text", "csv"}))
      ->capture_default_str();

  // couple2
  auto* couple_cmd =
      app.add_subcommand("couple2", "two-chain coupling runs over a list of seeds");
  couple_cmd->fallthrough();
  std::uint64_t cp_k = 0, cp_l = 0, cp_steps = 0, cp_depth = 2;
  std::string cp_dist_text, cp_init_a = "base:1", cp_init_b = "base:3";
  std::vector<std::uint64_t> cp_seeds{0};
  couple_cmd->add_option("-k,--k", cp_k)->required();
  couple_cmd->add_option("-l,--l", cp_l)->required();
  couple_cmd->add_option("-d,--dist", cp_dist_text)->required();
  couple_cmd->add_option("-n,--steps", cp_steps)->required();
  couple_cmd->add_option("--init-a", cp_init_a)->capture_default_str();
  couple_cmd->add_option("--init-b", cp_init_b)->capture_default_str();
  couple_cmd->add_option("--seeds", cp_seeds, "comma-separated seed list")
      ->delimiter(',')
      ->capture_default_str();
  couple_cmd->add_option("--depth", cp_depth, "bins per sampled top pattern")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(apply_cmd)) {
      // positionals take precedence; a "base:" prefix marks the infinite form
      if (!apply_pos_config.empty()) {
        if (apply_pos_config.rfind("base:", 0) == 0)
          apply_infinite = apply_pos_config;
        else
          apply_config = apply_pos_config;
      }
      if (!apply_pos_word.empty()) apply_word_text = apply_pos_word;
      if (apply_word_text.empty())
        throw infbin::InvalidParams("apply needs a move word (positional or --word)");
      const infbin::MoveWord word = infbin::MoveWord::parse(apply_word_text);
      ordered_json out;
      std::string result_text;
      if (!apply_infinite.empty()) {
        const auto start = infbin::LazyInfiniteConfiguration::parse(apply_infinite);
        const auto result = infbin::apply_word(start, word);
        result_text = result.to_string();
        out = ordered_json{{"input", start.to_string()},
                           {"word", word.to_string()},
                           {"result", result_text},
                           {"new_bins", result.shift() - start.shift()}};
      } else if (!apply_config.empty()) {
        const auto start = infbin::Configuration::parse(apply_config);
        const auto result = infbin::apply_word(start, word);
        result_text = result.to_string();
        out = ordered_json{{"input", start.to_string()},
                           {"word", word.to_string()},
                           {"result", result_text}};
      } else {
        throw infbin::InvalidParams(
            "apply needs a configuration (positional, --config, or --infinite)");
      }
      if (apply_format == "text")
        std::cout << result_text << "\n";
      else
        emit(out, apply_format);
      return 0;
    }

    if (app.got_subcommand(construct_cmd)) {
      if (con_n_opt->count() == 0) con_n = con_l;
      const infbin::CouplingPlan plan = infbin::build_coupling_plan(con_k, con_l, con_n);
      ordered_json out;
      infbin::to_json(out, plan);
      emit(out, con_format);
      return 0;
    }

    if (app.got_subcommand(verify_cmd)) {
      const std::optional<std::uint64_t> n =
          ver_n_opt->count() > 0 ? std::optional<std::uint64_t>(ver_n) : std::nullopt;
      const infbin::VerificationReport report =
          infbin::run_all_checks(ver_k, ver_l, n, infbin::resolve_threads(threads));
      ordered_json out;
      infbin::to_json(out, report);
      if (!ver_timings) out.erase("elapsed_ms");
      emit(out, ver_format);
      return report.all_pass() ? 0 : 5;
    }

    if (app.got_subcommand(lemmas_cmd)) {
      const unsigned worker_count = infbin::resolve_threads(threads);
      if (lem_sweep_opt->count() > 0) {
        bool all_pass = true;
        for (std::uint64_t l = 3; l <= lem_sweep; ++l)
          for (std::uint64_t k = 2; k < l; ++k) {
            const infbin::VerificationReport report =
                infbin::run_lemma_checks(k, l, worker_count);
            ordered_json out;
            infbin::to_json(out, report);
            if (!lem_timings) out.erase("elapsed_ms");
            std::cout << out.dump() << "\n";
            all_pass = all_pass && report.all_pass();
          }
        return all_pass ? 0 : 5;
      }
      if (lem_k_opt->count() == 0 || lem_l_opt->count() == 0)
        throw infbin::InvalidParams("lemmas needs --k and --l, or --sweep-l-max");
      const infbin::VerificationReport report =
          infbin::run_lemma_checks(lem_k, lem_l, worker_count);
      ordered_json out;
      infbin::to_json(out, report);
      if (!lem_timings) out.erase("elapsed_ms");
      emit(out, "json");
      return report.all_pass() ? 0 : 5;
    }

    if (app.got_subcommand(sync_cmd)) {
      if (!sync_check_word.empty()) {
        const infbin::MoveWord word = infbin::MoveWord::parse(sync_check_word);
        const std::optional<infbin::Configuration> terminal =
            infbin::synchronizes_to(sync_l, word, infbin::resolve_threads(threads));
        const ordered_json out{
            {"l", sync_l},
            {"word", word.to_string()},
            {"synchronizes", terminal.has_value()},
            {"terminal", terminal ? ordered_json(terminal->to_string()) : nullptr}};
        emit(out, sync_format);
        return 0;
      }
      if (sync_alphabet.empty())
        throw infbin::InvalidParams("sync needs --alphabet (or --check-word)");
      const infbin::SyncResult result = [&] {
        if (sync_greedy) return infbin::greedy_sync(sync_l, sync_alphabet);
        try {
          return infbin::shortest_sync_exact(sync_l, sync_alphabet, sync_max_subsets);
        } catch (const infbin::SubsetSpaceTooLarge& e) {
          throw infbin::SubsetSpaceTooLarge(std::string(e.what()) + " (try --greedy)");
        }
      }();
      ordered_json out;
      infbin::to_json(out, result);
      emit(out, sync_format);
      return 0;
    }

    if (app.got_subcommand(sim_cmd)) {
      const infbin::DistributionSpec dist = infbin::DistributionSpec::parse(sim_dist_text);
      const auto initial = infbin::LazyInfiniteConfiguration::parse(sim_init_text);
      if (sim_stationary) {
        if (sim_format == "csv")
          throw infbin::InvalidParams("csv output is only for single-chain runs");
        const auto initial_b = infbin::LazyInfiniteConfiguration::parse(sim_init_b_text);
        const infbin::StationaryReport report = infbin::estimate_stationary(
            initial, initial_b, dist, sim_depth, sim_replicas, sim_steps, sim_seed,
            infbin::resolve_threads(threads));
        ordered_json out;
        infbin::to_json(out, report);
        emit(out, sim_format);
        return 0;
      }
      if (sim_two_opt->count() > 0) {
        if (sim_format == "csv")
          throw infbin::InvalidParams("csv output is only for single-chain runs");
        if (sim_watch_opt->count() == 0)
          throw infbin::InvalidParams("--two-chain needs --watch k,l");
        auto chain_a = initial;
        auto chain_b = infbin::LazyInfiniteConfiguration::parse(sim_init_b_text);
        if (!sim_two_inits.empty())
          chain_a = infbin::LazyInfiniteConfiguration::parse(sim_two_inits[0]);
        if (sim_two_inits.size() > 1)
          chain_b = infbin::LazyInfiniteConfiguration::parse(sim_two_inits[1]);
        const infbin::WatchSpec watch =
            infbin::watch_from_plan(sim_watch_pair[0], sim_watch_pair[1]);
        const infbin::TwoChainReport report = infbin::run_two_chain_coupling(
            chain_a, chain_b, dist, sim_steps, sim_seed, watch);
        ordered_json out;
        infbin::to_json(out, report);
        emit(out, sim_format);
        return 0;
      }
      infbin::RunOptions opts;
      opts.steps = sim_steps;
      opts.seed = sim_seed;
      opts.histogram_depth = sim_depth;
      opts.max_regen_times = sim_regen_cap;
      opts.period_cap = sim_period_cap;
      if (sim_watch_opt->count() > 0)
        opts.watch = infbin::watch_from_plan(sim_watch_pair[0], sim_watch_pair[1]);
      if (sim_format == "csv") {
        std::cout << "step,binsCreated,topBinVector\n";
        const std::uint64_t start_shift = initial.shift();
        opts.on_step = [start_shift, depth = sim_depth](
                           std::uint64_t step, std::uint64_t,
                           const infbin::LazyInfiniteConfiguration& config) {
          std::cout << step << ',' << (config.shift() - start_shift) << ",\"" << '[';
          const std::vector<std::uint64_t> bins = infbin::top_bins(config, depth);
          for (std::size_t i = 0; i < bins.size(); ++i) {
            if (i) std::cout << ',';
            std::cout << bins[i];
          }
          std::cout << "]\"\n";
        };
        infbin::run_chain(initial, dist, opts);
        return 0;
      }
      const infbin::SingleChainReport report = infbin::run_chain(initial, dist, opts);
      ordered_json out;
      infbin::to_json(out, report);
      emit(out, sim_format);
      return 0;
    }

    if (app.got_subcommand(couple_cmd)) {
      const infbin::DistributionSpec dist = infbin::DistributionSpec::parse(cp_dist_text);
      const auto initial_a = infbin::LazyInfiniteConfiguration::parse(cp_init_a);
      const auto initial_b = infbin::LazyInfiniteConfiguration::parse(cp_init_b);
      const infbin::CoupleSweepReport report =
          infbin::run_couple_sweep(initial_a, initial_b, dist, cp_steps, cp_seeds, cp_k,
                                   cp_l, cp_depth, infbin::resolve_threads(threads));
      ordered_json out;
      infbin::to_json(out, report);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const infbin::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const infbin::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const infbin::ResourceCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const infbin::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
