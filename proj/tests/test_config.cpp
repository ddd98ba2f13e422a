#include <catch_amalgamated.hpp>

#include <sstream>

#include "ecosim/config.hpp"

using namespace ecosim;

namespace {

SimConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sim_config(in);
}

const char* kMinimal =
    "community.main.tokens = 0-7\n"
    "community.main.users = 3\n";

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
  const SimConfig cfg = parse(kMinimal);
  REQUIRE(cfg.alphabet_size == 64);
  REQUIRE(cfg.ga.population_size == 50);
  REQUIRE(cfg.ga.generations_max == 100);
  REQUIRE(cfg.ga.fitness_threshold == 0.95);
  REQUIRE(cfg.ga.tournament_size == 2);
  REQUIRE(cfg.ga.crossover_rate == 0.7);
  REQUIRE(cfg.ga.max_sequence_length == 16);
  REQUIRE(cfg.ga.parsimony_beta == 0.02);
  REQUIRE(cfg.ga.eval_probability_q == 1.0);
  REQUIRE(cfg.ga.usage_halfsat_k == 5);
  REQUIRE(cfg.ga.usage_weight_max == 0.3);
  REQUIRE(cfg.habitat.p_min == 0.05);
  REQUIRE(cfg.habitat.hebbian_eta == 0.2);
  REQUIRE(cfg.habitat.initial_probability == 0.5);
  REQUIRE(cfg.habitat.unused_threshold == 10);
  REQUIRE(cfg.workload.request_rate == 0.3);
  REQUIRE(cfg.workload.request_size_min == 2);
  REQUIRE(cfg.workload.request_size_max == 5);
  REQUIRE(cfg.workload.noise_rate == 0.1);
  REQUIRE(cfg.effective_execution_threshold() == 0.95);
  REQUIRE(cfg.communities.size() == 1);
  REQUIRE(cfg.communities[0].tokens.size() == 8);
  REQUIRE(cfg.communities[0].users == 3);
  REQUIRE(cfg.total_users() == 3);
}

TEST_CASE("comments, blank lines and ranges parse") {
  const SimConfig cfg = parse(
      "# a comment\n"
      "\n"
      "alphabet_size = 32   # trailing comment\n"
      "workload.request_size = 3..4\n"
      "ecosystem.description_size = 2\n"
      "community.a.tokens = 0-3,8,10-11\n"
      "community.a.users = 2\n"
      "community.b.tokens = 16-23\n"
      "community.b.users = 4\n");
  REQUIRE(cfg.alphabet_size == 32);
  REQUIRE(cfg.workload.request_size_min == 3);
  REQUIRE(cfg.workload.request_size_max == 4);
  REQUIRE(cfg.description_size_min == 2);
  REQUIRE(cfg.description_size_max == 2);
  REQUIRE(cfg.communities[0].tokens == std::vector<Token>{0, 1, 2, 3, 8, 10, 11});
  REQUIRE(cfg.communities[1].users == 4);
  REQUIRE(cfg.total_users() == 6);
}

TEST_CASE("unknown keys are rejected with the key path") {
  try {
    parse("ga.populaton_size = 50\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.key() == "ga.populaton_size");
  }
}

TEST_CASE("out-of-range values name the field") {
  try {
    parse(std::string(kMinimal) + "ga.fitness_threshold = 1.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.key() == "ga.fitness_threshold");
  }
}

TEST_CASE("community tokens outside the alphabet fail validation") {
  try {
    parse(
        "alphabet_size = 8\n"
        "community.main.tokens = 0-9\n"
        "community.main.users = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.key() == "community.main.tokens");
  }
}

TEST_CASE("a config without communities fails validation") {
  REQUIRE_THROWS_AS(parse("alphabet_size = 64\n"), ConfigError);
}

TEST_CASE("malformed lines report the line number") {
  try {
    parse("just some words\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.key() == "line 1");
  }
}

TEST_CASE("initial_probability below p_min is rejected") {
  REQUIRE_THROWS_AS(
      parse(std::string(kMinimal) + "habitat.initial_probability = 0.01\n"),
      ConfigError);
}

TEST_CASE("tournament size below two is rejected") {
  REQUIRE_THROWS_AS(parse(std::string(kMinimal) + "ga.tournament_size = 1\n"), ConfigError);
}
