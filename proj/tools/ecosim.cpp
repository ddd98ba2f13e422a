// Command-line front end: run simulations, query the exhaustive oracle, and
// run the migration on/off comparison experiment.
//
// Exit codes: 0 success, 2 usage/config error, 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ecosim/ecosim.hpp"

namespace fs = std::filesystem;
using ecosim::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

unsigned thread_budget() {
  if (const char* env = std::getenv("ECOSIM_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<ecosim::Token> parse_tokens(const std::string& spec) {
  std::vector<ecosim::Token> tokens;
  std::string item;
  std::stringstream ss(spec);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    tokens.push_back(static_cast<ecosim::Token>(std::stoul(item)));
  }
  return tokens;
}

// Pooled mean generations-to-threshold over a round window, from metrics rows.
double pooled_generations(const ecosim::Ecosystem& eco, ecosim::Round from_round) {
  double weighted = 0.0;
  std::uint64_t executed = 0;
  for (const auto& row : eco.metrics) {
    if (row.round <= from_round) continue;
    weighted += row.mean_generations_to_threshold * static_cast<double>(row.executed_count);
    executed += row.executed_count;
  }
  return executed == 0 ? 0.0 : weighted / static_cast<double>(executed);
}

int cmd_run(const std::string& config_path, std::uint64_t seed, std::uint32_t rounds,
            const std::string& out_dir, bool force, bool migration_enabled) {
  ecosim::SimConfig cfg;
  try {
    cfg = ecosim::load_sim_config(config_path);
  } catch (const ecosim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ecosim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "i/o error: cannot create " << out_dir << ": " << ec.message() << "\n";
    return kExitIo;
  }
  const fs::path events_path = fs::path(out_dir) / "events.jsonl";
  const fs::path metrics_path = fs::path(out_dir) / "metrics.csv";
  const fs::path summary_path = fs::path(out_dir) / "summary.json";
  if (!force) {
    for (const fs::path& p : {events_path, metrics_path, summary_path}) {
      if (fs::exists(p)) {
        std::cerr << "i/o error: " << p.string()
                  << " already exists (use --force to overwrite)\n";
        return kExitIo;
      }
    }
  }

  const auto eco =
      ecosim::run_simulation(cfg, seed, rounds, migration_enabled, thread_budget());

  try {
    {
      std::ofstream out(events_path, std::ios::binary);
      if (!out) throw ecosim::IoError("cannot open " + events_path.string());
      out << ecosim::events_jsonl(eco);
    }
    ecosim::export_csv(eco.metrics, metrics_path.string());
    {
      std::ofstream out(summary_path, std::ios::binary);
      if (!out) throw ecosim::IoError("cannot open " + summary_path.string());
      out << ecosim::summary_json(eco).dump(2) << "\n";
    }
  } catch (const ecosim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cout << "wrote " << events_path.string() << ", " << metrics_path.string() << ", "
            << summary_path.string() << "\n";
  return kExitOk;
}

int cmd_oracle(const std::vector<std::string>& agent_specs, const std::string& request_spec,
               std::uint32_t l_bound, double beta, std::uint32_t alphabet) {
  std::unordered_map<ecosim::AgentId, ecosim::SemanticDescription> table;
  std::vector<ecosim::AgentId> ids;
  try {
    for (std::size_t i = 0; i < agent_specs.size(); ++i) {
      const auto id = static_cast<ecosim::AgentId>(i + 1);
      table.emplace(id, ecosim::validate_description(parse_tokens(agent_specs[i]), alphabet));
      ids.push_back(id);
    }
    ecosim::Request req;
    req.description = ecosim::validate_description(parse_tokens(request_spec), alphabet);

    ecosim::GAConfig cfg;
    cfg.parsimony_beta = beta;
    const auto result = ecosim::brute_force_oracle(
        ids, req, cfg, l_bound,
        [&table](ecosim::AgentId id) -> const ecosim::SemanticDescription* {
          auto it = table.find(id);
          return it == table.end() ? nullptr : &it->second;
        },
        [](ecosim::AgentId) -> std::uint64_t { return 0; });

    Json j;
    j["fitness"] = result.fitness;
    Json seq = Json::array();
    for (ecosim::AgentId id : result.seq.agents) seq.push_back(id - 1);  // 0-based index
    j["sequence"] = seq;
    std::cout << j.dump() << "\n";
    return kExitOk;
  } catch (const ecosim::OracleGuardError& e) {
    std::cerr << "oracle guard: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ecosim::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_compare(const std::string& config_path, std::vector<std::uint64_t> seeds,
                std::uint32_t rounds, std::uint32_t warmup) {
  if (seeds.size() < 2) {
    std::cerr << "usage error: compare needs at least 2 seeds\n";
    return kExitUsage;
  }
  if (warmup >= rounds) {
    std::cerr << "usage error: warmup must be smaller than rounds\n";
    return kExitUsage;
  }
  ecosim::SimConfig cfg;
  try {
    cfg = ecosim::load_sim_config(config_path);
  } catch (const ecosim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ecosim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }

  const unsigned threads = thread_budget();
  Json per_seed = Json::array();
  double on_sum = 0.0, off_sum = 0.0;
  for (std::uint64_t seed : seeds) {
    const auto on = ecosim::run_simulation(cfg, seed, rounds, true, threads);
    const auto off = ecosim::run_simulation(cfg, seed, rounds, false, threads);
    const double on_mean = pooled_generations(on, warmup);
    const double off_mean = pooled_generations(off, warmup);
    on_sum += on_mean;
    off_sum += off_mean;
    Json row;
    row["seed"] = seed;
    row["migration_on"] = on_mean;
    row["migration_off"] = off_mean;
    per_seed.push_back(row);
  }
  const double on_mean = on_sum / static_cast<double>(seeds.size());
  const double off_mean = off_sum / static_cast<double>(seeds.size());
  Json j;
  j["rounds"] = rounds;
  j["warmup"] = warmup;
  j["per_seed"] = per_seed;
  j["migration_on_mean_generations"] = on_mean;
  j["migration_off_mean_generations"] = off_mean;
  j["ratio"] = off_mean == 0.0 ? 0.0 : on_mean / off_mean;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ecosim: evolutionary service-composition ecosystem simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a simulation and write its artifacts");
  std::string run_config;
  std::uint64_t run_seed = 1;
  std::uint32_t run_rounds = 100;
  std::string run_out = "out";
  bool run_force = false;
  bool run_migration = true;
  run->add_option("--config", run_config, "config file path")->required();
  run->add_option("--seed", run_seed, "root RNG seed");
  run->add_option("--rounds", run_rounds, "rounds to simulate")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "output directory")->required();
  run->add_flag("--force", run_force, "overwrite existing outputs");
  run->add_option("--migration-enabled", run_migration,
                  "enable agent/solution migration (A/B switch)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum for a small pool");
  std::vector<std::string> oracle_agents;
  std::string oracle_request;
  std::uint32_t oracle_bound = 4;
  double oracle_beta = 0.02;
  std::uint32_t oracle_alphabet = 64;
  oracle->add_option("--agent", oracle_agents, "agent description, e.g. 1,2,3 (repeatable)")
      ->required();
  oracle->add_option("--request", oracle_request, "request tokens, e.g. 1,2")->required();
  oracle->add_option("--l-bound", oracle_bound, "maximum sequence length (<= 4)");
  oracle->add_option("--beta", oracle_beta, "parsimony pressure");
  oracle->add_option("--alphabet", oracle_alphabet, "alphabet size");

  // compare
  auto* compare = app.add_subcommand("compare", "paired migration on/off experiment");
  std::string cmp_config;
  std::vector<std::uint64_t> cmp_seeds;
  std::uint32_t cmp_rounds = 150;
  std::uint32_t cmp_warmup = 50;
  compare->add_option("--config", cmp_config, "config file path")->required();
  compare->add_option("--seeds", cmp_seeds, "seed list (comma separated or repeated)")
      ->required()
      ->delimiter(',');
  compare->add_option("--rounds", cmp_rounds, "rounds per run")->check(CLI::PositiveNumber);
  compare->add_option("--warmup", cmp_warmup, "rounds excluded from the measurement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (run->parsed())
    return cmd_run(run_config, run_seed, run_rounds, run_out, run_force, run_migration);
  if (oracle->parsed())
    return cmd_oracle(oracle_agents, oracle_request, oracle_bound, oracle_beta,
                      oracle_alphabet);
  if (compare->parsed()) return cmd_compare(cmp_config, cmp_seeds, cmp_rounds, cmp_warmup);
  return kExitUsage;
}
