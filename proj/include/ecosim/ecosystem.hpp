#pragma once

// Top-level simulation: community workload generation, the round scheduler,
// request dispatch to evolving populations, solution execution, migration
// feedback with multi-hop link creation, and the append-only event log.
//
// A round runs seven phases in fixed order. Phase 2 (evolution) is the only
// parallel part; it works on immutable snapshots, and results are applied in
// ascending habitat-id order, so output is identical for any thread count.

#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ecosim/config.hpp"
#include "ecosim/core.hpp"
#include "ecosim/errors.hpp"
#include "ecosim/evolution.hpp"
#include "ecosim/habitat.hpp"
#include "ecosim/metrics.hpp"
#include "ecosim/rng.hpp"

namespace ecosim {

using Json = nlohmann::ordered_json;

enum class EventType {
  Request,
  Evolved,
  Executed,
  Skipped,
  Registered,
  Migrated,
  LinkCreated,
  LinkRemoved,
  Escape,
  Deleted,
  Disconnected,
};

inline const char* to_string(EventType t) {
  switch (t) {
    case EventType::Request: return "REQUEST";
    case EventType::Evolved: return "EVOLVED";
    case EventType::Executed: return "EXECUTED";
    case EventType::Skipped: return "SKIPPED";
    case EventType::Registered: return "REGISTERED";
    case EventType::Migrated: return "MIGRATED";
    case EventType::LinkCreated: return "LINK_CREATED";
    case EventType::LinkRemoved: return "LINK_REMOVED";
    case EventType::Escape: return "ESCAPE";
    case EventType::Deleted: return "DELETED";
    case EventType::Disconnected: return "DISCONNECTED";
  }
  return "?";
}

struct Event {
  Round round = 0;
  int phase = 0;
  EventType type = EventType::Request;
  HabitatId habitat = 0;
  Json payload;
};

inline Json event_json(const Event& e) {
  Json j;
  j["round"] = e.round;
  j["phase"] = e.phase;
  j["type"] = to_string(e.type);
  j["habitat"] = e.habitat;
  j["payload"] = e.payload;
  return j;
}

struct ExecutionRecord {
  Request request;
  EvaluatedIndividual best;
  std::uint32_t generations_used = 0;
  bool executed = false;
};

struct CommunityModel {
  CommunityId id = 0;
  std::string name;
  SemanticDescription token_pool;
  std::vector<HabitatId> members;
};

struct Ecosystem {
  SimConfig cfg;
  std::uint64_t seed = 0;
  HabitatMap habitats;
  AgentRegistry registry;
  std::vector<CommunityModel> communities;
  Round round = 0;
  std::vector<Event> events;
  std::vector<MetricsRow> metrics;
  bool migration_enabled = true;
  unsigned threads = 1;
  // agents that covered request tokens in an executed solution since they
  // arrived at their current habitat; cleared when they move on
  std::set<AgentId> contributed_since_arrival;

  void log(int phase, EventType type, HabitatId habitat, Json payload) {
    events.push_back(Event{round, phase, type, habitat, std::move(payload)});
  }
};

namespace stream_tag {
inline constexpr std::uint64_t build = 1;
inline constexpr std::uint64_t workload = 2;
inline constexpr std::uint64_t evolve = 3;
inline constexpr std::uint64_t migrate = 4;
inline constexpr std::uint64_t escape = 5;
inline constexpr std::uint64_t rejoin = 6;
}  // namespace stream_tag

namespace detail {

inline Json tokens_json(const SemanticDescription& d) {
  Json arr = Json::array();
  for (Token t : d.tokens()) arr.push_back(t);
  return arr;
}

inline Json sequence_json(const AgentSequence& s) {
  Json arr = Json::array();
  for (AgentId id : s.agents) arr.push_back(id);
  return arr;
}

// k-th alphabet token not contained in pool, k in [0, alphabet - |pool|).
inline Token nth_token_outside(const SemanticDescription& pool, std::uint32_t alphabet,
                               std::uint64_t k) {
  std::uint64_t seen = 0;
  for (Token t = 0; t < alphabet; ++t) {
    if (!pool.contains(t)) {
      if (seen == k) return t;
      ++seen;
    }
  }
  return alphabet - 1;  // unreachable when k is in range
}

}  // namespace detail

// Creates the habitats (random join, ascending id) and places each user's
// initial agents. Initial placement is local only; distribution happens
// through the simulation's own migration machinery.
inline Ecosystem build_ecosystem(const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Ecosystem eco;
  eco.cfg = cfg;
  eco.seed = seed;

  HabitatId next_id = 0;
  for (std::size_t ci = 0; ci < cfg.communities.size(); ++ci) {
    const CommunitySpec& spec = cfg.communities[ci];
    CommunityModel model;
    model.id = static_cast<CommunityId>(ci);
    model.name = spec.name;
    model.token_pool = validate_description(spec.tokens, cfg.alphabet_size);
    for (std::uint32_t u = 0; u < spec.users; ++u) model.members.push_back(next_id++);
    eco.communities.push_back(std::move(model));
  }

  Rng build_rng = Rng::stream(seed, {stream_tag::build});
  for (const CommunityModel& community : eco.communities) {
    for (HabitatId id : community.members)
      join_network(eco.habitats, eco.registry, id, community.id, JoinStrategy::Random, 0,
                   cfg.habitat, build_rng);
  }

  for (const CommunityModel& community : eco.communities) {
    const auto& pool_tokens = community.token_pool.tokens();
    for (HabitatId id : community.members) {
      for (std::uint32_t n = 0; n < cfg.initial_agents_per_user; ++n) {
        const std::uint32_t size_cap =
            std::min<std::uint32_t>(cfg.description_size_max,
                                    static_cast<std::uint32_t>(pool_tokens.size()));
        const std::uint32_t size = static_cast<std::uint32_t>(
            build_rng.range(std::min(cfg.description_size_min, size_cap), size_cap));
        // sample distinct tokens from the community pool
        std::vector<Token> scratch = pool_tokens;
        std::vector<Token> chosen;
        for (std::uint32_t i = 0; i < size; ++i) {
          const std::size_t j = i + build_rng.index(scratch.size() - i);
          std::swap(scratch[i], scratch[j]);
          chosen.push_back(scratch[i]);
        }
        Agent& agent =
            eco.registry.create(SemanticDescription(std::move(chosen)), id, id,
                                escape_range(eco.habitats, id, cfg.habitat));
        eco.habitats.at(id).pool.agents.insert(agent.id);
      }
    }
  }
  return eco;
}

// Applies Hebbian feedback for one executed solution. Credit goes to the
// habitats that contributed: the creation habitats of members whose removal
// would reduce coverage (redundant members are bloat, not use), plus the
// sequence's evolution provenance. Existing links from them toward the
// executing habitat are reinforced, missing ones are created at p0 (the
// multi-hop rule), and the final hop of each contributing member that
// migrated here is reinforced. Every distinct inbound link receives at most
// one success update per execution.
inline void migration_feedback(Ecosystem& eco, const ExecutionRecord& record) {
  const HabitatId here = record.request.origin_habitat;
  auto resolve = [&reg = eco.registry](AgentId id) { return reg.resolve(id); };
  const std::set<AgentId> members(record.best.seq.agents.begin(),
                                  record.best.seq.agents.end());
  const std::size_t full = coverage(record.best.seq, record.request, resolve);
  std::set<AgentId> contributors;
  for (AgentId id : members) {
    AgentSequence probe;
    for (AgentId m : record.best.seq.agents)
      if (m != id) probe.agents.push_back(m);
    if (probe.agents.empty() || coverage(probe, record.request, resolve) < full)
      contributors.insert(id);
  }

  for (AgentId id : contributors) eco.contributed_since_arrival.insert(id);

  std::set<HabitatId> origins;
  for (AgentId id : contributors) origins.insert(eco.registry.at(id).creation_habitat());
  for (HabitatId p : record.best.seq.provenance) origins.insert(p);
  origins.erase(here);

  std::set<HabitatId> sources = origins;
  for (AgentId id : contributors) {
    const auto& history = eco.registry.at(id).migration_history;
    if (history.size() >= 2 && history.back() == here)
      sources.insert(history[history.size() - 2]);
  }

  for (HabitatId src : sources) {
    Habitat& from = eco.habitats.at(src);
    if (from.find_connection(here) != nullptr) {
      apply_hebbian(eco.habitats, src, here, true, eco.cfg.habitat);
    } else if (origins.contains(src)) {
      from.add_connection(here, eco.cfg.habitat.initial_probability);
      eco.log(4, EventType::LinkCreated, src,
              Json{{"from", src}, {"to", here}, {"p", eco.cfg.habitat.initial_probability}});
    }
  }
}

namespace detail {

struct RoundJob {
  Request request;
  PoolSnapshot snapshot;
  bool empty_pool = false;
};

inline void run_jobs(Ecosystem& eco, std::vector<RoundJob>& jobs,
                     std::vector<std::optional<EvolutionResult>>& results) {
  results.assign(jobs.size(), std::nullopt);
  auto resolve = [&reg = eco.registry](AgentId id) { return reg.resolve(id); };
  auto uses = [&reg = eco.registry](AgentId id) { return reg.uses(id); };
  auto run_one = [&](std::size_t i) {
    const RoundJob& job = jobs[i];
    if (job.empty_pool) return;
    Rng rng = Rng::stream(eco.seed, {stream_tag::evolve, job.request.round,
                                     job.request.origin_habitat});
    results[i] = run_evolution(job.snapshot, job.request, eco.cfg.ga, resolve, uses, rng);
  };

  const unsigned workers =
      std::min<unsigned>(std::max(1u, eco.threads), static_cast<unsigned>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

inline void step_round(Ecosystem& eco) {
  ++eco.round;
  const Round round = eco.round;
  const SimConfig& cfg = eco.cfg;

  // Phase 1: request generation.
  std::vector<detail::RoundJob> jobs;
  for (const auto& [id, habitat] : eco.habitats) {
    Rng rng = Rng::stream(eco.seed, {stream_tag::workload, round, id});
    if (!rng.bernoulli(cfg.workload.request_rate)) continue;
    const CommunityModel& community = eco.communities.at(habitat.community);
    const std::size_t pool_size = community.token_pool.size();
    const std::uint64_t target =
        rng.range(cfg.workload.request_size_min, cfg.workload.request_size_max);
    std::set<Token> tokens;
    const bool noise_possible = pool_size < cfg.alphabet_size;
    for (std::uint64_t attempts = 0; tokens.size() < target && attempts < 16 * target + 16;
         ++attempts) {
      if (noise_possible && rng.bernoulli(cfg.workload.noise_rate)) {
        tokens.insert(detail::nth_token_outside(
            community.token_pool, cfg.alphabet_size,
            rng.bounded(cfg.alphabet_size - pool_size)));
      } else {
        tokens.insert(community.token_pool.tokens()[rng.index(pool_size)]);
      }
    }
    detail::RoundJob job;
    job.request.description =
        SemanticDescription(std::vector<Token>(tokens.begin(), tokens.end()));
    job.request.origin_habitat = id;
    job.request.round = round;
    job.empty_pool = habitat.pool.agents.empty();
    if (!job.empty_pool) {
      job.snapshot.agents.assign(habitat.pool.agents.begin(), habitat.pool.agents.end());
      job.snapshot.sequences = habitat.pool.sequences;
    }
    eco.log(1, EventType::Request, id,
            Json{{"tokens", detail::tokens_json(job.request.description)}});
    jobs.push_back(std::move(job));
  }

  // Phase 2: independent evolution over immutable snapshots (parallel).
  std::vector<std::optional<EvolutionResult>> results;
  detail::run_jobs(eco, jobs, results);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    if (job.empty_pool) {
      eco.log(2, EventType::Skipped, job.request.origin_habitat,
              Json{{"tokens", detail::tokens_json(job.request.description)},
                   {"reason", "empty pool"}});
      continue;
    }
    const EvolutionResult& r = *results[i];
    eco.log(2, EventType::Evolved, job.request.origin_habitat,
            Json{{"tokens", detail::tokens_json(job.request.description)},
                 {"sequence", detail::sequence_json(r.best.seq)},
                 {"fitness", r.best.fitness},
                 {"semantic", r.best.semantic_score},
                 {"usage", r.best.usage_score},
                 {"generations", r.generations_used},
                 {"pareto_front_size", pareto_front(r.final_population.individuals).size()}});
  }

  // Phase 3: sequential apply in ascending habitat id.
  const double exec_threshold = cfg.effective_execution_threshold();
  std::vector<ExecutionRecord> records;
  double round_pop_length_sum = 0.0;
  std::uint64_t round_pop_individuals = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].empty_pool) continue;
    const Request& request = jobs[i].request;
    const EvolutionResult& result = *results[i];
    Habitat& habitat = eco.habitats.at(request.origin_habitat);

    for (const auto& ind : result.final_population.individuals) {
      round_pop_length_sum += static_cast<double>(ind.seq.length());
      ++round_pop_individuals;
    }

    ExecutionRecord record;
    record.request = request;
    record.best = result.best;
    record.generations_used = result.generations_used;
    record.executed = result.best.fitness >= exec_threshold;

    AgentSequence registered = result.best.seq;
    const auto origins = merge_provenance(registered.provenance, {habitat.id});
    if (register_sequence(habitat, registered, origins)) {
      eco.log(3, EventType::Registered, habitat.id,
              Json{{"sequence", detail::sequence_json(result.best.seq)},
                   {"provenance", origins}});
    }

    const std::set<AgentId> members(record.best.seq.agents.begin(),
                                    record.best.seq.agents.end());
    for (AgentId id : habitat.pool.agents) {
      if (record.executed && members.contains(id)) continue;
      ++eco.registry.at(id).requests_seen_unused;
    }
    if (record.executed) {
      for (AgentId id : members) {
        Agent& agent = eco.registry.at(id);
        ++agent.uses;
        agent.requests_seen_unused = 0;
      }
      eco.log(3, EventType::Executed, habitat.id,
              Json{{"sequence", detail::sequence_json(record.best.seq)},
                   {"fitness", record.best.fitness},
                   {"generations", record.generations_used}});
    }
    records.push_back(std::move(record));
  }

  if (eco.migration_enabled) {
    // Phase 4: migration feedback for executed solutions.
    for (const ExecutionRecord& record : records)
      if (record.executed) migration_feedback(eco, record);

    // Phase 5: copy executed solutions across every out-connection. A
    // delivery whose sequence shares no token with anything in the
    // destination pool cannot serve that habitat's users: the exchange
    // failed, and the link is marked for decay (applied in phase 6, where
    // all connection updates outside feedback live).
    std::map<HabitatId, std::set<Token>> pool_tokens;
    for (const auto& [id, habitat] : eco.habitats) {
      auto& tokens = pool_tokens[id];
      for (AgentId agent_id : habitat.pool.agents)
        for (Token t : eco.registry.at(agent_id).description.tokens()) tokens.insert(t);
    }
    std::vector<std::pair<HabitatId, HabitatId>> failed_deliveries;
    for (const ExecutionRecord& record : records) {
      if (!record.executed) continue;
      const HabitatId here = record.request.origin_habitat;
      Rng rng = Rng::stream(eco.seed, {stream_tag::migrate, round, here});
      AgentSequence outbound = record.best.seq;
      outbound.provenance = merge_provenance(outbound.provenance, {here});
      for (const SequenceDelivery& delivery :
           migrate_copy_sequence(eco.habitats, outbound, here, rng)) {
        if (delivery.newly_stored) {
          eco.log(5, EventType::Migrated, here,
                  Json{{"to", delivery.dest}, {"sequence", detail::sequence_json(outbound)}});
        }
        const auto& dest_tokens = pool_tokens.at(delivery.dest);
        bool usable = false;
        for (AgentId id : outbound.agents) {
          for (Token t : eco.registry.at(id).description.tokens()) {
            if (dest_tokens.contains(t)) {
              usable = true;
              break;
            }
          }
          if (usable) break;
        }
        if (!usable) failed_deliveries.push_back({here, delivery.dest});
      }
    }

    // Phase 6: failed-exchange decay, then escape moves for agents that sat
    // unused through too many requests. An agent that was delivered here and
    // leaves unused marks the delivery as a failed exchange, so its arrival
    // link decays; a never-used lineage dying does the same. Habitats that
    // lost every connection rejoin randomly.
    for (const auto& [from, to] : failed_deliveries) {
      const bool existed = eco.habitats.at(from).find_connection(to) != nullptr;
      const auto hebbian = apply_hebbian(eco.habitats, from, to, false, cfg.habitat);
      if (existed && hebbian.removed)
        eco.log(6, EventType::LinkRemoved, from, Json{{"from", from}, {"to", to}});
    }
    Rng escape_rng = Rng::stream(eco.seed, {stream_tag::escape, round});
    for (auto& [id, habitat] : eco.habitats) {
      for (AgentId agent_id :
           prune_candidates(habitat, eco.registry, cfg.habitat.unused_threshold)) {
        const Agent& before = eco.registry.at(agent_id);
        const bool deleting =
            before.escapes_remaining == 0 || habitat.out_connections.empty();
        const bool failed_exchange =
            before.migration_history.size() >= 2 &&
            (deleting ? before.uses == 0
                      : !eco.contributed_since_arrival.contains(agent_id));
        const HabitatId hop_from =
            failed_exchange
                ? before.migration_history[before.migration_history.size() - 2]
                : 0;
        const EscapeOutcome outcome =
            escape_move(eco.habitats, eco.registry, agent_id, id, escape_rng);
        eco.contributed_since_arrival.erase(agent_id);
        if (outcome.deleted) {
          eco.log(6, EventType::Deleted, id, Json{{"agent", agent_id}});
        } else {
          eco.log(6, EventType::Escape, id,
                  Json{{"agent", agent_id}, {"from", id}, {"to", outcome.moved_to}});
        }
        if (failed_exchange) {
          const bool existed = eco.habitats.at(hop_from).find_connection(id) != nullptr;
          const auto hebbian = apply_hebbian(eco.habitats, hop_from, id, false, cfg.habitat);
          if (existed && hebbian.removed) {
            eco.log(6, EventType::LinkRemoved, hop_from,
                    Json{{"from", hop_from}, {"to", id}});
          }
        }
      }
    }

    if (eco.habitats.size() > 1) {
      std::set<HabitatId> has_inbound;
      for (const auto& [id, habitat] : eco.habitats)
        for (const Connection& c : habitat.out_connections) has_inbound.insert(c.to);
      for (auto& [id, habitat] : eco.habitats) {
        if (!habitat.out_connections.empty() || has_inbound.contains(id)) continue;
        eco.log(6, EventType::Disconnected, id, Json::object());
        Rng rng = Rng::stream(eco.seed, {stream_tag::rejoin, round, id});
        std::vector<HabitatId> candidates;
        for (const auto& [other_id, other] : eco.habitats)
          if (other_id != id) candidates.push_back(other_id);
        const std::size_t picks =
            std::min<std::size_t>(cfg.habitat.random_join_count, candidates.size());
        for (std::size_t i = 0; i < picks; ++i) {
          const std::size_t j = i + rng.index(candidates.size() - i);
          std::swap(candidates[i], candidates[j]);
          habitat.add_connection(candidates[i], cfg.habitat.initial_probability);
          eco.habitats.at(candidates[i])
              .add_connection(id, cfg.habitat.initial_probability);
          eco.log(6, EventType::LinkCreated, id,
                  Json{{"from", id},
                       {"to", candidates[i]},
                       {"p", cfg.habitat.initial_probability}});
        }
      }
    }
  }

  // Phase 7: metrics snapshot.
  MetricsRow row;
  row.round = round;
  double best_fitness_sum = 0.0, generations_sum = 0.0;
  std::uint64_t evolved = 0;
  for (const ExecutionRecord& record : records) {
    best_fitness_sum += record.best.fitness;
    ++evolved;
    if (record.executed) {
      ++row.executed_count;
      generations_sum += static_cast<double>(record.generations_used);
    }
  }
  row.mean_best_fitness = evolved == 0 ? 0.0 : best_fitness_sum / static_cast<double>(evolved);
  row.mean_generations_to_threshold =
      row.executed_count == 0
          ? 0.0
          : generations_sum / static_cast<double>(row.executed_count);
  const UndirectedGraph graph = effective_graph(eco.habitats, cfg.habitat.p_min);
  row.clustering_coefficient = clustering_coefficient(graph);
  row.characteristic_path_length = characteristic_path_length(graph);
  row.intra_community_mass = intra_community_mass(eco.habitats);
  row.agent_count = eco.registry.live_count();
  row.mean_sequence_length =
      round_pop_individuals == 0
          ? 0.0
          : round_pop_length_sum / static_cast<double>(round_pop_individuals);
  double diversity_sum = 0.0;
  for (const auto& [id, habitat] : eco.habitats) {
    std::set<std::vector<Token>> distinct;
    for (AgentId agent_id : habitat.pool.agents)
      distinct.insert(eco.registry.at(agent_id).description.tokens());
    diversity_sum += static_cast<double>(distinct.size());
  }
  row.pool_diversity =
      eco.habitats.empty() ? 0.0 : diversity_sum / static_cast<double>(eco.habitats.size());
  eco.metrics.push_back(row);
}

inline Ecosystem run_simulation(const SimConfig& cfg, std::uint64_t seed, Round rounds,
                                bool migration_enabled = true, unsigned threads = 1) {
  Ecosystem eco = build_ecosystem(cfg, seed);
  eco.migration_enabled = migration_enabled;
  eco.threads = threads;
  for (Round r = 0; r < rounds; ++r) step_round(eco);
  return eco;
}

inline std::string events_jsonl(const Ecosystem& eco) {
  std::string out;
  for (const Event& e : eco.events) {
    out += event_json(e).dump();
    out += '\n';
  }
  return out;
}

// Canonical key=value echo of a configuration, in config-file key order.
inline Json config_json(const SimConfig& cfg) {
  Json j;
  j["alphabet_size"] = cfg.alphabet_size;
  j["ga.population_size"] = cfg.ga.population_size;
  j["ga.generations_max"] = cfg.ga.generations_max;
  j["ga.fitness_threshold"] = cfg.ga.fitness_threshold;
  j["ga.tournament_size"] = cfg.ga.tournament_size;
  j["ga.crossover_rate"] = cfg.ga.crossover_rate;
  j["ga.mutation_insert_rate"] = cfg.ga.mutation_insert_rate;
  j["ga.mutation_delete_rate"] = cfg.ga.mutation_delete_rate;
  j["ga.mutation_replace_rate"] = cfg.ga.mutation_replace_rate;
  j["ga.max_sequence_length"] = cfg.ga.max_sequence_length;
  j["ga.parsimony_beta"] = cfg.ga.parsimony_beta;
  j["ga.eval_probability_q"] = cfg.ga.eval_probability_q;
  j["ga.usage_halfsat_k"] = cfg.ga.usage_halfsat_k;
  j["ga.usage_weight_max"] = cfg.ga.usage_weight_max;
  j["habitat.p_min"] = cfg.habitat.p_min;
  j["habitat.hebbian_eta"] = cfg.habitat.hebbian_eta;
  j["habitat.initial_probability"] = cfg.habitat.initial_probability;
  j["habitat.random_join_count"] = cfg.habitat.random_join_count;
  j["habitat.unused_threshold"] = cfg.habitat.unused_threshold;
  j["habitat.escape_min"] = cfg.habitat.escape_min;
  j["workload.request_rate"] = cfg.workload.request_rate;
  j["workload.request_size"] =
      std::to_string(cfg.workload.request_size_min) + ".." +
      std::to_string(cfg.workload.request_size_max);
  j["workload.noise_rate"] = cfg.workload.noise_rate;
  j["ecosystem.initial_agents_per_user"] = cfg.initial_agents_per_user;
  j["ecosystem.description_size"] = std::to_string(cfg.description_size_min) + ".." +
                                    std::to_string(cfg.description_size_max);
  j["ecosystem.execution_threshold"] = cfg.effective_execution_threshold();
  Json communities = Json::object();
  for (const CommunitySpec& c : cfg.communities) {
    Json entry;
    entry["tokens"] = c.tokens;
    entry["users"] = c.users;
    communities[c.name] = entry;
  }
  j["communities"] = communities;
  return j;
}

inline Json summary_json(const Ecosystem& eco) {
  Json j;
  j["seed"] = eco.seed;
  j["rounds"] = eco.round;
  j["migration_enabled"] = eco.migration_enabled;
  j["config"] = config_json(eco.cfg);
  if (!eco.metrics.empty()) {
    const MetricsRow& last = eco.metrics.back();
    Json m;
    m["round"] = last.round;
    m["executed_count"] = last.executed_count;
    m["mean_best_fitness"] = last.mean_best_fitness;
    m["mean_generations_to_threshold"] = last.mean_generations_to_threshold;
    m["clustering_coefficient"] = last.clustering_coefficient;
    if (last.characteristic_path_length)
      m["characteristic_path_length"] = *last.characteristic_path_length;
    else
      m["characteristic_path_length"] = nullptr;
    m["intra_community_mass"] = last.intra_community_mass;
    m["agent_count"] = last.agent_count;
    m["mean_sequence_length"] = last.mean_sequence_length;
    m["pool_diversity"] = last.pool_diversity;
    j["final_metrics"] = m;
  }
  return j;
}

}  // namespace ecosim
