#pragma once

// Per-request evolving population: a variable-length genetic algorithm over
// agent sequences. Fitness blends semantic coverage with accrued usage and
// applies three bloat controls (hard length cap, parsimony pressure, reduced
// evaluation probability for oversized individuals). A brute-force oracle is
// included for verification on small instances.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ecosim/config.hpp"
#include "ecosim/core.hpp"
#include "ecosim/errors.hpp"
#include "ecosim/rng.hpp"

namespace ecosim {

struct EvaluatedIndividual {
  AgentSequence seq;
  double semantic_score = 0.0;
  double usage_score = 0.0;
  double fitness = 0.0;
  bool skipped = false;  // bypassed by the reduced-evaluation mechanism
};

// Immutable view of a habitat's pool taken before evolution starts.
struct PoolSnapshot {
  std::vector<AgentId> agents;          // local agent ids
  std::vector<AgentSequence> sequences; // registered sequences (local + migrated)
};

struct Population {
  Request request;
  std::vector<EvaluatedIndividual> individuals;
  std::uint32_t generation = 0;
  Rng rng;
};

template <class Resolve>
double mean_description_size(const std::vector<AgentId>& pool_agents, Resolve&& resolve) {
  double sum = 0.0;
  for (AgentId id : pool_agents)
    sum += static_cast<double>(detail::resolve_or_throw(resolve, id).size());
  return sum / static_cast<double>(pool_agents.size());
}

// Shortest plausible covering length for a request: ceil(|req| / d̄) where
// d̄ is the mean description size over the pool. Lengths beyond this are
// charged parsimony pressure.
inline std::uint32_t parsimony_baseline(std::size_t request_tokens, double mean_desc_size) {
  return static_cast<std::uint32_t>(
      std::ceil(static_cast<double>(request_tokens) / mean_desc_size));
}

// Scores one sequence. Uses must be callable as uses(id) -> uint64_t.
// Consumes exactly one rng draw when the reduced-evaluation mechanism is
// armed (q < 1 and the sequence is longer than the generation mean).
template <class Resolve, class Uses>
EvaluatedIndividual evaluate_fitness(const AgentSequence& seq, const Request& req,
                                     Resolve&& resolve, Uses&& uses, const GAConfig& cfg,
                                     std::uint32_t parsimony_base, double gen_mean_length,
                                     Rng& rng) {
  EvaluatedIndividual out;
  out.seq = seq;
  const double len = static_cast<double>(seq.length());
  if (cfg.eval_probability_q < 1.0 && len > gen_mean_length &&
      rng.bernoulli(1.0 - cfg.eval_probability_q)) {
    out.skipped = true;
    return out;  // fitness stays 0
  }

  const std::size_t covered = coverage(seq, req, resolve);
  out.semantic_score =
      static_cast<double>(covered) / static_cast<double>(req.description.size());

  const double k = static_cast<double>(cfg.usage_halfsat_k);
  std::uint64_t min_uses = std::numeric_limits<std::uint64_t>::max();
  double usage_sum = 0.0;
  for (AgentId id : seq.agents) {
    const std::uint64_t u = uses(id);
    min_uses = std::min(min_uses, u);
    usage_sum += static_cast<double>(u) / (static_cast<double>(u) + k);
  }
  out.usage_score = usage_sum / len;

  // Usage weight ramps up with proven use; one unproven member keeps the
  // sequence scored almost purely on its semantics.
  const double u_min = static_cast<double>(min_uses);
  const double w_eff = cfg.usage_weight_max * (u_min / (u_min + k));
  const double raw = (1.0 - w_eff) * out.semantic_score + w_eff * out.usage_score;

  const double excess = std::max(0.0, len - static_cast<double>(parsimony_base));
  out.fitness = std::max(0.0, raw - cfg.parsimony_beta * excess);
  return out;
}

// Objective vector for Pareto comparisons: (semantic, usage, -length).
using Objectives = std::array<double, 3>;

inline Objectives objectives(const EvaluatedIndividual& e) {
  return {e.semantic_score, e.usage_score, -static_cast<double>(e.seq.length())};
}

inline bool dominates(const Objectives& a, const Objectives& b) {
  bool no_worse = true, better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) no_worse = false;
    if (a[i] > b[i]) better = true;
  }
  return no_worse && better;
}

inline bool dominates(const EvaluatedIndividual& a, const EvaluatedIndividual& b) {
  return dominates(objectives(a), objectives(b));
}

inline std::vector<std::size_t> pareto_front(const std::vector<EvaluatedIndividual>& pop) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pop.size() && !dominated; ++j)
      if (j != i && dominates(pop[j], pop[i])) dominated = true;
    if (!dominated) front.push_back(i);
  }
  return front;
}

// Selection order: higher fitness, then shorter sequence, then earlier index.
inline bool selection_beats(const std::vector<EvaluatedIndividual>& pop, std::size_t a,
                            std::size_t b) {
  if (pop[a].fitness != pop[b].fitness) return pop[a].fitness > pop[b].fitness;
  if (pop[a].seq.length() != pop[b].seq.length())
    return pop[a].seq.length() < pop[b].seq.length();
  return a < b;
}

inline std::size_t elite_index(const Population& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.individuals.size(); ++i)
    if (selection_beats(pop.individuals, i, best)) best = i;
  return best;
}

inline std::size_t tournament_select_index(const Population& pop, const GAConfig& cfg,
                                           Rng& rng) {
  std::size_t best = rng.index(pop.individuals.size());
  for (std::uint32_t t = 1; t < cfg.tournament_size; ++t) {
    const std::size_t challenger = rng.index(pop.individuals.size());
    if (selection_beats(pop.individuals, challenger, best)) best = challenger;
  }
  return best;
}

inline const AgentSequence& tournament_select(const Population& pop, const GAConfig& cfg,
                                              Rng& rng) {
  return pop.individuals[tournament_select_index(pop, cfg, rng)].seq;
}

// One-point crossover at explicit cut points c1 in [0, len(p1)] and
// c2 in [0, len(p2)]: child = p1[0..c1) ++ p2[c2..). An empty child falls
// back to p1's head; overlong children are truncated to the hard cap.
// Provenance records where a *combination* was evolved, so a parent passes
// it on only when the child inherits a segment of at least two agents; a
// lone agent carries its own ancestry through its creation habitat instead.
inline AgentSequence crossover_at(const AgentSequence& p1, const AgentSequence& p2,
                                  std::size_t c1, std::size_t c2, std::uint32_t max_len) {
  AgentSequence child;
  child.agents.assign(p1.agents.begin(), p1.agents.begin() + static_cast<std::ptrdiff_t>(c1));
  child.agents.insert(child.agents.end(),
                      p2.agents.begin() + static_cast<std::ptrdiff_t>(c2), p2.agents.end());
  if (child.agents.empty()) child.agents.push_back(p1.agents.front());
  std::size_t tail = child.agents.size() > c1 ? child.agents.size() - c1 : 0;
  if (child.agents.size() > max_len) {
    child.agents.resize(max_len);
    tail = child.agents.size() > c1 ? child.agents.size() - c1 : 0;
  }
  const bool from_p1 = c1 >= 2;
  const bool from_p2 = tail >= 2;
  if (from_p1 && from_p2) {
    child.provenance = merge_provenance(p1.provenance, p2.provenance);
  } else if (from_p1) {
    child.provenance = p1.provenance;
  } else if (from_p2) {
    child.provenance = p2.provenance;
  }
  return child;
}

inline AgentSequence crossover(const AgentSequence& p1, const AgentSequence& p2,
                               std::uint32_t max_len, Rng& rng) {
  const std::size_t c1 = rng.index(p1.length() + 1);
  const std::size_t c2 = rng.index(p2.length() + 1);
  return crossover_at(p1, p2, c1, c2, max_len);
}

inline void insert_agent(AgentSequence& seq, std::size_t pos, AgentId id) {
  seq.agents.insert(seq.agents.begin() + static_cast<std::ptrdiff_t>(pos), id);
}

inline void remove_agent(AgentSequence& seq, std::size_t pos) {
  seq.agents.erase(seq.agents.begin() + static_cast<std::ptrdiff_t>(pos));
}

inline void replace_agent(AgentSequence& seq, std::size_t pos, AgentId id) {
  seq.agents[pos] = id;
}

// Switches agents in and out of the sequence. Operators fire independently
// with their configured rates, in fixed order insert -> delete -> replace;
// guards keep the length within [1, max_sequence_length].
inline AgentSequence mutate(AgentSequence seq, const std::vector<AgentId>& pool_agents,
                            const GAConfig& cfg, Rng& rng) {
  if (rng.bernoulli(cfg.mutation_insert_rate) && seq.length() < cfg.max_sequence_length) {
    const std::size_t pos = rng.index(seq.length() + 1);
    insert_agent(seq, pos, pool_agents[rng.index(pool_agents.size())]);
  }
  if (rng.bernoulli(cfg.mutation_delete_rate) && seq.length() > 1) {
    remove_agent(seq, rng.index(seq.length()));
  }
  if (rng.bernoulli(cfg.mutation_replace_rate)) {
    const std::size_t pos = rng.index(seq.length());
    replace_agent(seq, pos, pool_agents[rng.index(pool_agents.size())]);
  }
  return seq;
}

// Builds the initial population: each slot is, with equal probability, a
// registered pool sequence relevant to the request (if any exist) or a fresh
// random sequence of length 1..min(4, cap) drawn from the pool agents.
// Relevant sequences are ranked by request-token overlap (ties to the most
// recently registered) and seeding draws from the top slice, so a growing
// library keeps its best matches in front instead of burying them.
// Individuals are not yet evaluated.
template <class Resolve>
Population seed_population(const PoolSnapshot& pool, const Request& req, const GAConfig& cfg,
                           Rng rng, Resolve&& resolve) {
  if (pool.agents.empty())
    throw SeedingError("habitat pool has no agents; request must be declined");

  std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (overlap, index)
  {
    AgentSequence probe;
    for (std::size_t i = 0; i < pool.sequences.size(); ++i) {
      bool intersects = false;
      for (AgentId id : pool.sequences[i].agents) {
        if (detail::resolve_or_throw(resolve, id).intersects(req.description)) {
          intersects = true;
          break;
        }
      }
      if (intersects) ranked.push_back({coverage(pool.sequences[i], req, resolve), i});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second > b.second;
    });
    const std::size_t cap = std::max<std::size_t>(8, cfg.population_size / 2);
    if (ranked.size() > cap) ranked.resize(cap);
  }
  std::vector<std::size_t> relevant;
  relevant.reserve(ranked.size());
  for (const auto& [overlap, index] : ranked) relevant.push_back(index);

  const std::uint32_t seed_len_cap = std::min<std::uint32_t>(4, cfg.max_sequence_length);
  Population pop;
  pop.request = req;
  pop.rng = rng;
  pop.individuals.resize(cfg.population_size);
  for (auto& slot : pop.individuals) {
    if (!relevant.empty() && pop.rng.bernoulli(0.5)) {
      slot.seq = pool.sequences[relevant[pop.rng.index(relevant.size())]];
      if (slot.seq.agents.size() > cfg.max_sequence_length)
        slot.seq.agents.resize(cfg.max_sequence_length);
    } else {
      const std::uint64_t len = pop.rng.range(1, seed_len_cap);
      slot.seq.agents.reserve(len);
      for (std::uint64_t i = 0; i < len; ++i)
        slot.seq.agents.push_back(pool.agents[pop.rng.index(pool.agents.size())]);
    }
  }
  return pop;
}

template <class Resolve, class Uses>
void evaluate_population(Population& pop, const GAConfig& cfg, Resolve&& resolve, Uses&& uses,
                         std::uint32_t parsimony_base) {
  double len_sum = 0.0;
  for (const auto& ind : pop.individuals) len_sum += static_cast<double>(ind.seq.length());
  const double gen_mean_length = len_sum / static_cast<double>(pop.individuals.size());
  for (auto& ind : pop.individuals)
    ind = evaluate_fitness(ind.seq, pop.request, resolve, uses, cfg, parsimony_base,
                           gen_mean_length, pop.rng);
}

// Produces the next generation: one elite copied unchanged, the remainder
// bred by tournament selection, crossover (else cloning) and mutation.
// Everything, the elite included, is re-evaluated.
template <class Resolve, class Uses>
void evolve_generation(Population& pop, const PoolSnapshot& pool, const GAConfig& cfg,
                       Resolve&& resolve, Uses&& uses, std::uint32_t parsimony_base) {
  std::vector<EvaluatedIndividual> next;
  next.reserve(pop.individuals.size());
  next.push_back(pop.individuals[elite_index(pop)]);
  while (next.size() < pop.individuals.size()) {
    const std::size_t p1 = tournament_select_index(pop, cfg, pop.rng);
    EvaluatedIndividual child;
    if (pop.rng.bernoulli(cfg.crossover_rate)) {
      const std::size_t p2 = tournament_select_index(pop, cfg, pop.rng);
      child.seq = crossover(pop.individuals[p1].seq, pop.individuals[p2].seq,
                            cfg.max_sequence_length, pop.rng);
    } else {
      child.seq = pop.individuals[p1].seq;
    }
    child.seq = mutate(std::move(child.seq), pool.agents, cfg, pop.rng);
    next.push_back(std::move(child));
  }
  pop.individuals = std::move(next);
  ++pop.generation;
  evaluate_population(pop, cfg, resolve, uses, parsimony_base);
}

struct GenerationStats {
  double best_fitness = 0.0;
  double mean_length = 0.0;
};

struct EvolutionResult {
  EvaluatedIndividual best;  // best-ever individual across all generations
  std::uint32_t generations_used = 0;
  std::vector<GenerationStats> trajectory;  // one row per generation, gen 0 first
  Population final_population;
};

// Runs the full loop: seed, evaluate, evolve until the threshold or the
// generation budget is hit. Pure in (pool snapshot, request, cfg, rng).
template <class Resolve, class Uses>
EvolutionResult run_evolution(const PoolSnapshot& pool, const Request& req,
                              const GAConfig& cfg, Resolve&& resolve, Uses&& uses, Rng rng) {
  Population pop = seed_population(pool, req, cfg, rng, resolve);
  const double d_bar = mean_description_size(pool.agents, resolve);
  const std::uint32_t baseline = parsimony_baseline(req.description.size(), d_bar);
  evaluate_population(pop, cfg, resolve, uses, baseline);

  EvolutionResult result;
  bool have_best = false;
  auto record = [&]() {
    double len_sum = 0.0;
    for (const auto& ind : pop.individuals) len_sum += static_cast<double>(ind.seq.length());
    GenerationStats row;
    row.mean_length = len_sum / static_cast<double>(pop.individuals.size());
    for (const auto& ind : pop.individuals) {
      if (ind.skipped) continue;
      if (!have_best || ind.fitness > result.best.fitness ||
          (ind.fitness == result.best.fitness && ind.seq.length() < result.best.seq.length())) {
        result.best = ind;
        have_best = true;
      }
    }
    if (!have_best) result.best = pop.individuals.front();  // all skipped
    row.best_fitness = result.best.fitness;
    result.trajectory.push_back(row);
  };

  record();
  while (result.best.fitness < cfg.fitness_threshold && pop.generation < cfg.generations_max) {
    evolve_generation(pop, pool, cfg, resolve, uses, baseline);
    record();
  }
  result.generations_used = pop.generation;
  result.final_population = std::move(pop);
  return result;
}

struct OracleResult {
  double fitness = 0.0;
  AgentSequence seq;
};

// Exhaustive enumeration of every sequence of length 1..l_bound (with
// repetition) over the pool, scored with the same fitness arithmetic with
// reduced evaluation disabled. Guarded to stay tractable.
template <class Resolve, class Uses>
OracleResult brute_force_oracle(std::vector<AgentId> pool_agents, const Request& req,
                                const GAConfig& cfg, std::uint32_t l_bound,
                                Resolve&& resolve, Uses&& uses) {
  if (pool_agents.empty()) throw OracleGuardError("oracle needs a non-empty pool");
  if (pool_agents.size() > 8)
    throw OracleGuardError("oracle pool limited to 8 agents, got " +
                           std::to_string(pool_agents.size()));
  if (l_bound == 0 || l_bound > 4)
    throw OracleGuardError("oracle length bound limited to [1,4], got " +
                           std::to_string(l_bound));

  GAConfig eval_cfg = cfg;
  eval_cfg.eval_probability_q = 1.0;
  const double d_bar = mean_description_size(pool_agents, resolve);
  const std::uint32_t baseline = parsimony_baseline(req.description.size(), d_bar);

  std::sort(pool_agents.begin(), pool_agents.end());
  Rng unused_rng(0);  // never drawn from: q is disabled
  OracleResult best;
  best.fitness = -1.0;
  std::vector<std::size_t> odometer;
  AgentSequence cand;
  for (std::uint32_t len = 1; len <= l_bound; ++len) {
    odometer.assign(len, 0);
    while (true) {
      cand.agents.clear();
      for (std::size_t i : odometer) cand.agents.push_back(pool_agents[i]);
      const auto e = evaluate_fitness(cand, req, resolve, uses, eval_cfg, baseline, 0.0,
                                      unused_rng);
      if (e.fitness > best.fitness ||
          (e.fitness == best.fitness &&
           std::lexicographical_compare(cand.agents.begin(), cand.agents.end(),
                                        best.seq.agents.begin(), best.seq.agents.end()))) {
        best.fitness = e.fitness;
        best.seq = cand;
      }
      std::size_t digit = len;
      while (digit > 0) {
        if (++odometer[digit - 1] < pool_agents.size()) break;
        odometer[digit - 1] = 0;
        --digit;
      }
      if (digit == 0) break;
    }
  }
  return best;
}

}  // namespace ecosim
