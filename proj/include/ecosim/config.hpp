#pragma once

// Simulation configuration: typed parameter blocks with validation, and a
// parser for the flat `key = value` config file format (UTF-8, `#` comments).

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ecosim/core.hpp"
#include "ecosim/errors.hpp"

namespace ecosim {

struct GAConfig {
  std::uint32_t population_size = 50;
  std::uint32_t generations_max = 100;
  double fitness_threshold = 0.95;  // early-stop threshold
  std::uint32_t tournament_size = 2;
  double crossover_rate = 0.7;
  double mutation_insert_rate = 0.1;
  double mutation_delete_rate = 0.1;
  double mutation_replace_rate = 0.1;
  std::uint32_t max_sequence_length = 16;  // hard bloat cap
  double parsimony_beta = 0.02;            // penalty per agent beyond the baseline
  double eval_probability_q = 1.0;         // 1.0 disables reduced evaluation
  std::uint32_t usage_halfsat_k = 5;       // half-saturation of the usage ramp
  double usage_weight_max = 0.3;           // asymptotic usage weight
  std::uint64_t rng_seed = 0;

  void validate(const std::string& prefix = "ga") const {
    auto fail = [&](const char* field, const std::string& why) {
      throw ConfigError(prefix + "." + field, why);
    };
    if (population_size == 0) fail("population_size", "must be positive");
    if (generations_max == 0) fail("generations_max", "must be positive");
    if (!(fitness_threshold > 0.0 && fitness_threshold <= 1.0))
      fail("fitness_threshold", "must be in (0,1]");
    if (tournament_size < 2) fail("tournament_size", "must be >= 2");
    if (crossover_rate < 0.0 || crossover_rate > 1.0) fail("crossover_rate", "must be in [0,1]");
    if (mutation_insert_rate < 0.0 || mutation_insert_rate > 1.0)
      fail("mutation_insert_rate", "must be in [0,1]");
    if (mutation_delete_rate < 0.0 || mutation_delete_rate > 1.0)
      fail("mutation_delete_rate", "must be in [0,1]");
    if (mutation_replace_rate < 0.0 || mutation_replace_rate > 1.0)
      fail("mutation_replace_rate", "must be in [0,1]");
    if (max_sequence_length == 0) fail("max_sequence_length", "must be positive");
    if (parsimony_beta < 0.0) fail("parsimony_beta", "must be >= 0");
    if (!(eval_probability_q > 0.0 && eval_probability_q <= 1.0))
      fail("eval_probability_q", "must be in (0,1]");
    if (usage_halfsat_k == 0) fail("usage_halfsat_k", "must be positive");
    if (usage_weight_max < 0.0 || usage_weight_max >= 1.0)
      fail("usage_weight_max", "must be in [0,1)");
  }
};

struct HabitatConfig {
  double p_min = 0.05;               // connections below this are removed
  double hebbian_eta = 0.2;          // reinforcement/decay step
  double initial_probability = 0.5;  // p0 for new connections
  std::uint32_t random_join_count = 2;
  std::uint32_t unused_threshold = 10;  // requests before an unused agent escapes
  std::uint32_t escape_min = 2;         // floor of the escape range

  void validate(const std::string& prefix = "habitat") const {
    auto fail = [&](const char* field, const std::string& why) {
      throw ConfigError(prefix + "." + field, why);
    };
    if (!(p_min > 0.0 && p_min <= 1.0)) fail("p_min", "must be in (0,1]");
    if (!(hebbian_eta > 0.0 && hebbian_eta < 1.0)) fail("hebbian_eta", "must be in (0,1)");
    if (initial_probability < p_min || initial_probability > 1.0)
      fail("initial_probability", "must be in [p_min,1]");
    if (random_join_count == 0) fail("random_join_count", "must be positive");
    if (unused_threshold == 0) fail("unused_threshold", "must be positive");
    if (escape_min == 0) fail("escape_min", "must be positive");
  }
};

struct WorkloadConfig {
  double request_rate = 0.3;  // per user per round
  std::uint32_t request_size_min = 2;
  std::uint32_t request_size_max = 5;
  double noise_rate = 0.1;  // per-token chance of drawing outside the community pool

  void validate(const std::string& prefix = "workload") const {
    auto fail = [&](const char* field, const std::string& why) {
      throw ConfigError(prefix + "." + field, why);
    };
    if (request_rate < 0.0 || request_rate > 1.0) fail("request_rate", "must be in [0,1]");
    if (request_size_min == 0) fail("request_size", "minimum must be positive");
    if (request_size_max < request_size_min) fail("request_size", "max must be >= min");
    if (noise_rate < 0.0 || noise_rate > 1.0) fail("noise_rate", "must be in [0,1]");
  }
};

struct CommunitySpec {
  std::string name;
  std::vector<Token> tokens;  // the community's token pool
  std::uint32_t users = 0;    // habitats created for this community
};

struct SimConfig {
  std::uint32_t alphabet_size = 64;
  GAConfig ga;
  HabitatConfig habitat;
  WorkloadConfig workload;
  std::vector<CommunitySpec> communities;
  std::uint32_t initial_agents_per_user = 3;
  std::uint32_t description_size_min = 1;
  std::uint32_t description_size_max = 3;
  double execution_threshold = -1.0;  // < 0 means "use ga.fitness_threshold"

  double effective_execution_threshold() const {
    return execution_threshold < 0.0 ? ga.fitness_threshold : execution_threshold;
  }

  std::uint32_t total_users() const {
    std::uint32_t n = 0;
    for (const auto& c : communities) n += c.users;
    return n;
  }

  void validate() const {
    if (alphabet_size == 0) throw ConfigError("alphabet_size", "must be positive");
    ga.validate();
    habitat.validate();
    workload.validate();
    if (initial_agents_per_user == 0)
      throw ConfigError("ecosystem.initial_agents_per_user", "must be positive");
    if (description_size_min == 0)
      throw ConfigError("ecosystem.description_size", "minimum must be positive");
    if (description_size_max < description_size_min)
      throw ConfigError("ecosystem.description_size", "max must be >= min");
    if (execution_threshold > 1.0)
      throw ConfigError("ecosystem.execution_threshold", "must be <= 1");
    if (communities.empty()) throw ConfigError("community", "at least one community required");
    for (const auto& c : communities) {
      const std::string prefix = "community." + c.name;
      if (c.tokens.empty()) throw ConfigError(prefix + ".tokens", "must be non-empty");
      for (Token t : c.tokens) {
        if (t >= alphabet_size)
          throw ConfigError(prefix + ".tokens",
                            "token " + std::to_string(t) + " outside alphabet");
      }
      if (c.users == 0) throw ConfigError(prefix + ".users", "must be positive");
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_real(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
  if (pos != value.size()) throw ConfigError(key, "trailing characters in '" + value + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-')
    throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
  if (pos != value.size()) throw ConfigError(key, "trailing characters in '" + value + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key, "expected true/false, got '" + value + "'");
}

// "lo..hi" or a single integer.
inline std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& key,
                                                           const std::string& value) {
  const auto dots = value.find("..");
  if (dots == std::string::npos) {
    const auto v = static_cast<std::uint32_t>(parse_uint(key, value));
    return {v, v};
  }
  const auto lo = static_cast<std::uint32_t>(parse_uint(key, trim(value.substr(0, dots))));
  const auto hi = static_cast<std::uint32_t>(parse_uint(key, trim(value.substr(dots + 2))));
  return {lo, hi};
}

// Comma-separated tokens and inclusive ranges: "0-15,20,22".
inline std::vector<Token> parse_token_list(const std::string& key, const std::string& value) {
  std::vector<Token> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key, "empty item in token list");
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(static_cast<Token>(parse_uint(key, item)));
    } else {
      const auto lo = parse_uint(key, trim(item.substr(0, dash)));
      const auto hi = parse_uint(key, trim(item.substr(dash + 1)));
      if (hi < lo) throw ConfigError(key, "descending token range '" + item + "'");
      for (std::uint64_t t = lo; t <= hi; ++t) out.push_back(static_cast<Token>(t));
    }
  }
  if (out.empty()) throw ConfigError(key, "empty token list");
  return out;
}

}  // namespace detail

// Parses the flat key=value format. Unknown keys are rejected so typos
// surface immediately; the community table keeps file declaration order.
inline SimConfig parse_sim_config(std::istream& in) {
  SimConfig cfg;
  std::map<std::string, std::size_t> community_index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");

    using namespace detail;
    if (key == "alphabet_size") {
      cfg.alphabet_size = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "ga.population_size") {
      cfg.ga.population_size = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "ga.generations_max") {
      cfg.ga.generations_max = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "ga.fitness_threshold") {
      cfg.ga.fitness_threshold = parse_real(key, value);
    } else if (key == "ga.tournament_size") {
      cfg.ga.tournament_size = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "ga.crossover_rate") {
      cfg.ga.crossover_rate = parse_real(key, value);
    } else if (key == "ga.mutation_insert_rate") {
      cfg.ga.mutation_insert_rate = parse_real(key, value);
    } else if (key == "ga.mutation_delete_rate") {
      cfg.ga.mutation_delete_rate = parse_real(key, value);
    } else if (key == "ga.mutation_replace_rate") {
      cfg.ga.mutation_replace_rate = parse_real(key, value);
    } else if (key == "ga.max_sequence_length") {
      cfg.ga.max_sequence_length = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "ga.parsimony_beta") {
      cfg.ga.parsimony_beta = parse_real(key, value);
    } else if (key == "ga.eval_probability_q") {
      cfg.ga.eval_probability_q = parse_real(key, value);
    } else if (key == "ga.usage_halfsat_k") {
      cfg.ga.usage_halfsat_k = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "ga.usage_weight_max") {
      cfg.ga.usage_weight_max = parse_real(key, value);
    } else if (key == "ga.rng_seed") {
      cfg.ga.rng_seed = parse_uint(key, value);
    } else if (key == "habitat.p_min") {
      cfg.habitat.p_min = parse_real(key, value);
    } else if (key == "habitat.hebbian_eta") {
      cfg.habitat.hebbian_eta = parse_real(key, value);
    } else if (key == "habitat.initial_probability") {
      cfg.habitat.initial_probability = parse_real(key, value);
    } else if (key == "habitat.random_join_count") {
      cfg.habitat.random_join_count = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "habitat.unused_threshold") {
      cfg.habitat.unused_threshold = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "habitat.escape_min") {
      cfg.habitat.escape_min = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "workload.request_rate") {
      cfg.workload.request_rate = parse_real(key, value);
    } else if (key == "workload.request_size") {
      const auto [lo, hi] = parse_range(key, value);
      cfg.workload.request_size_min = lo;
      cfg.workload.request_size_max = hi;
    } else if (key == "workload.noise_rate") {
      cfg.workload.noise_rate = parse_real(key, value);
    } else if (key == "ecosystem.initial_agents_per_user") {
      cfg.initial_agents_per_user = static_cast<std::uint32_t>(parse_uint(key, value));
    } else if (key == "ecosystem.description_size") {
      const auto [lo, hi] = parse_range(key, value);
      cfg.description_size_min = lo;
      cfg.description_size_max = hi;
    } else if (key == "ecosystem.execution_threshold") {
      cfg.execution_threshold = parse_real(key, value);
    } else if (key.rfind("community.", 0) == 0) {
      const std::string rest = key.substr(10);
      const auto dot = rest.find('.');
      if (dot == std::string::npos || dot == 0)
        throw ConfigError(key, "expected community.<name>.tokens or community.<name>.users");
      const std::string name = rest.substr(0, dot);
      const std::string field = rest.substr(dot + 1);
      auto [it, inserted] = community_index.try_emplace(name, cfg.communities.size());
      if (inserted) {
        CommunitySpec spec;
        spec.name = name;
        cfg.communities.push_back(std::move(spec));
      }
      CommunitySpec& spec = cfg.communities[it->second];
      if (field == "tokens") {
        spec.tokens = parse_token_list(key, value);
      } else if (field == "users") {
        spec.users = static_cast<std::uint32_t>(parse_uint(key, value));
      } else {
        throw ConfigError(key, "unknown community field '" + field + "'");
      }
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  cfg.validate();
  return cfg;
}

inline SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse_sim_config(in);
}

}  // namespace ecosim
