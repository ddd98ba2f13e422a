#pragma once

// Habitat state and its operations: agent pools, directed probabilistic
// connections with Hebbian reinforcement/decay, deployment, probabilistic
// copy-migration, escape moves and network join strategies. Habitats are
// mutated only from the ecosystem's sequential apply phase.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecosim/config.hpp"
#include "ecosim/core.hpp"
#include "ecosim/errors.hpp"
#include "ecosim/evolution.hpp"
#include "ecosim/rng.hpp"

namespace ecosim {

// Directed link; p(from->to) is independent of p(to->from).
struct Connection {
  HabitatId from = 0;
  HabitatId to = 0;
  double p = 0.0;
};

struct AgentPool {
  std::set<AgentId> agents;              // ids hosted here (records live in the registry)
  std::vector<AgentSequence> sequences;  // registered sequences, dedup by agent-id list
};

struct Habitat {
  HabitatId id = 0;
  AgentPool pool;
  std::vector<Connection> out_connections;  // sorted by destination, one per pair
  CommunityId community = 0;                // workload metadata, hidden from the algorithm

  Connection* find_connection(HabitatId to) {
    for (auto& c : out_connections)
      if (c.to == to) return &c;
    return nullptr;
  }
  const Connection* find_connection(HabitatId to) const {
    for (const auto& c : out_connections)
      if (c.to == to) return &c;
    return nullptr;
  }

  // Keeps the list sorted; rejects self-connections and duplicates.
  Connection& add_connection(HabitatId to, double p) {
    auto it = out_connections.begin();
    while (it != out_connections.end() && it->to < to) ++it;
    return *out_connections.insert(it, Connection{id, to, p});
  }

  void remove_connection(HabitatId to) {
    for (auto it = out_connections.begin(); it != out_connections.end(); ++it) {
      if (it->to == to) {
        out_connections.erase(it);
        return;
      }
    }
  }
};

using HabitatMap = std::map<HabitatId, Habitat>;

// Global agent table. Records are kept after deletion (alive=false) so that
// sequence members always resolve; pools reference records by id.
class AgentRegistry {
public:
  Agent& create(SemanticDescription desc, HabitatId creation_habitat, HabitatId owner,
                std::uint32_t escapes) {
    Agent a;
    a.id = next_id_++;
    a.description = std::move(desc);
    a.owner = owner;
    a.escapes_remaining = escapes;
    a.migration_history.push_back(creation_habitat);
    auto [it, ok] = agents_.emplace(a.id, std::move(a));
    return it->second;
  }

  Agent* find(AgentId id) {
    auto it = agents_.find(id);
    return it == agents_.end() ? nullptr : &it->second;
  }
  const Agent* find(AgentId id) const {
    auto it = agents_.find(id);
    return it == agents_.end() ? nullptr : &it->second;
  }

  Agent& at(AgentId id) {
    auto it = agents_.find(id);
    if (it == agents_.end()) throw LookupError("unresolvable agent id " + std::to_string(id));
    return it->second;
  }
  const Agent& at(AgentId id) const {
    auto it = agents_.find(id);
    if (it == agents_.end()) throw LookupError("unresolvable agent id " + std::to_string(id));
    return it->second;
  }

  const SemanticDescription* resolve(AgentId id) const {
    auto it = agents_.find(id);
    return it == agents_.end() ? nullptr : &it->second.description;
  }

  std::uint64_t uses(AgentId id) const {
    auto it = agents_.find(id);
    return it == agents_.end() ? 0 : it->second.uses;
  }

  std::size_t live_count() const {
    std::size_t n = 0;
    for (const auto& [id, a] : agents_)
      if (a.alive) ++n;
    return n;
  }

  const std::map<AgentId, Agent>& all() const { return agents_; }
  std::map<AgentId, Agent>& all() { return agents_; }

private:
  std::map<AgentId, Agent> agents_;
  AgentId next_id_ = 1;
};

// --- Hebbian connectivity -------------------------------------------------

inline double hebbian_success(double p, double eta) { return p + eta * (1.0 - p); }
inline double hebbian_failure(double p, double eta) { return p * (1.0 - eta); }

struct HebbianOutcome {
  double p = 0.0;
  bool removed = false;
};

// Updates from->to in place; the connection is removed once p drops below
// p_min. No-op (removed=true, p=0) if the connection does not exist.
inline HebbianOutcome apply_hebbian(HabitatMap& habitats, HabitatId from, HabitatId to,
                                    bool success, const HabitatConfig& cfg) {
  auto it = habitats.find(from);
  if (it == habitats.end()) return {0.0, true};
  Connection* conn = it->second.find_connection(to);
  if (conn == nullptr) return {0.0, true};
  conn->p = success ? hebbian_success(conn->p, cfg.hebbian_eta)
                    : hebbian_failure(conn->p, cfg.hebbian_eta);
  if (conn->p < cfg.p_min) {
    it->second.remove_connection(to);
    return {0.0, true};
  }
  return {conn->p, false};
}

// --- Cluster structure ----------------------------------------------------

// Size of the weakly-connected component containing h, over edges with
// p >= p_min in either direction.
inline std::uint32_t cluster_size(const HabitatMap& habitats, HabitatId h, double p_min) {
  if (!habitats.contains(h)) return 0;
  std::map<HabitatId, std::vector<HabitatId>> adj;
  for (const auto& [id, hab] : habitats) {
    for (const auto& c : hab.out_connections) {
      if (c.p >= p_min) {
        adj[c.from].push_back(c.to);
        adj[c.to].push_back(c.from);
      }
    }
  }
  std::set<HabitatId> seen{h};
  std::vector<HabitatId> queue{h};
  while (!queue.empty()) {
    const HabitatId cur = queue.back();
    queue.pop_back();
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (HabitatId next : it->second)
      if (seen.insert(next).second) queue.push_back(next);
  }
  return static_cast<std::uint32_t>(seen.size());
}

// Dynamic time-to-live: grows with the log of the habitat's cluster size,
// floored at cfg.escape_min.
inline std::uint32_t escape_range(const HabitatMap& habitats, HabitatId h,
                                  const HabitatConfig& cfg) {
  const std::uint32_t size = std::max<std::uint32_t>(1, cluster_size(habitats, h, cfg.p_min));
  std::uint32_t log2_floor = 0;
  for (std::uint32_t v = size; v > 1; v >>= 1) ++log2_floor;
  return std::max(cfg.escape_min, log2_floor + 1);
}

// --- Agent movement -------------------------------------------------------

struct CopyOutcome {
  HabitatId dest = 0;
  AgentId copy_id = 0;
};

namespace detail {

inline AgentId copy_agent_to(HabitatMap& habitats, AgentRegistry& registry,
                             const Agent& original, HabitatId dest,
                             const HabitatConfig& cfg) {
  Agent& copy = registry.create(original.description, original.creation_habitat(),
                                original.owner, 0);
  copy.migration_history = original.migration_history;
  copy.migration_history.push_back(dest);
  copy.escapes_remaining = escape_range(habitats, dest, cfg);
  habitats.at(dest).pool.agents.insert(copy.id);
  return copy.id;
}

}  // namespace detail

// Probabilistic copy of an agent to every out-connection of `from`. The
// original is untouched; each copy is a fresh registry entry whose history
// ends at its destination.
inline std::vector<CopyOutcome> migrate_copy_agent(HabitatMap& habitats,
                                                   AgentRegistry& registry, AgentId id,
                                                   HabitatId from, const HabitatConfig& cfg,
                                                   Rng& rng) {
  Habitat& origin = habitats.at(from);
  if (!origin.pool.agents.contains(id))
    throw LookupError("agent " + std::to_string(id) + " not in pool of habitat " +
                      std::to_string(from));
  const Agent& original = registry.at(id);
  std::vector<CopyOutcome> copies;
  for (const Connection& conn : origin.out_connections) {
    if (rng.bernoulli(conn.p))
      copies.push_back({conn.to, detail::copy_agent_to(habitats, registry, original,
                                                       conn.to, cfg)});
  }
  return copies;
}

// Creates a new agent at habitat h, then attempts copy-migration across
// every out-connection. Returns the new agent's id plus the copies made.
struct DeployOutcome {
  AgentId agent_id = 0;
  std::vector<CopyOutcome> copies;
};

inline DeployOutcome deploy_agent(HabitatMap& habitats, AgentRegistry& registry, HabitatId h,
                                  SemanticDescription desc, const HabitatConfig& cfg,
                                  Rng& rng) {
  Habitat& habitat = habitats.at(h);
  Agent& agent = registry.create(std::move(desc), h, h, escape_range(habitats, h, cfg));
  habitat.pool.agents.insert(agent.id);
  DeployOutcome out;
  out.agent_id = agent.id;
  out.copies = migrate_copy_agent(habitats, registry, agent.id, h, cfg, rng);
  return out;
}

struct EscapeOutcome {
  bool deleted = false;
  HabitatId moved_to = 0;  // valid when !deleted
};

// Move (not copy) an unused agent to a uniformly chosen out-neighbour,
// spending one escape. With no budget left, or nowhere to go, the agent
// is deleted.
inline EscapeOutcome escape_move(HabitatMap& habitats, AgentRegistry& registry, AgentId id,
                                 HabitatId from, Rng& rng) {
  Habitat& origin = habitats.at(from);
  Agent& agent = registry.at(id);
  if (agent.escapes_remaining == 0 || origin.out_connections.empty()) {
    origin.pool.agents.erase(id);
    agent.alive = false;
    return {true, 0};
  }
  const std::size_t pick = rng.index(origin.out_connections.size());
  const HabitatId dest = origin.out_connections[pick].to;
  origin.pool.agents.erase(id);
  habitats.at(dest).pool.agents.insert(id);
  --agent.escapes_remaining;
  agent.requests_seen_unused = 0;
  agent.migration_history.push_back(dest);
  return {false, dest};
}

// Agents whose unused-request window has filled; candidates for escape.
inline std::vector<AgentId> prune_candidates(const Habitat& h, const AgentRegistry& registry,
                                             std::uint32_t unused_threshold) {
  std::vector<AgentId> due;
  for (AgentId id : h.pool.agents) {
    const Agent& a = registry.at(id);
    if (a.requests_seen_unused >= unused_threshold) due.push_back(id);
  }
  return due;
}

// --- Sequences ------------------------------------------------------------

// Stores seq with the given provenance; duplicates (identical agent-id list)
// are not stored twice, but their provenance is merged. Returns true when
// the sequence is new to this pool.
inline bool register_sequence(Habitat& h, AgentSequence seq, std::vector<HabitatId> origins) {
  std::sort(origins.begin(), origins.end());
  origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
  for (auto& existing : h.pool.sequences) {
    if (existing.agents == seq.agents) {
      existing.provenance = merge_provenance(existing.provenance, origins);
      return false;
    }
  }
  seq.provenance = std::move(origins);
  h.pool.sequences.push_back(std::move(seq));
  return true;
}

// Probabilistic copy of a registered sequence to every out-connection.
// Reports every delivery that fired; newly_stored is false when the
// destination already held an identical sequence.
struct SequenceDelivery {
  HabitatId dest = 0;
  bool newly_stored = false;
};

inline std::vector<SequenceDelivery> migrate_copy_sequence(HabitatMap& habitats,
                                                           const AgentSequence& seq,
                                                           HabitatId from, Rng& rng) {
  std::vector<SequenceDelivery> deliveries;
  for (const Connection& conn : habitats.at(from).out_connections) {
    if (rng.bernoulli(conn.p)) {
      const bool stored = register_sequence(habitats.at(conn.to), seq, seq.provenance);
      deliveries.push_back({conn.to, stored});
    }
  }
  return deliveries;
}

// --- Network join ---------------------------------------------------------

enum class JoinStrategy { Random, Clone };

// Creates habitat new_id and wires it into the network. Random: bidirectional
// links at p0 to up to random_join_count distinct habitats. Clone: the named
// habitat's out-connections at the same probabilities, plus a link to it.
// Either way the new pool merges copies of all agents in the habitats the
// new one initially connects to.
inline Habitat& join_network(HabitatMap& habitats, AgentRegistry& registry, HabitatId new_id,
                             CommunityId community, JoinStrategy strategy,
                             HabitatId clone_of, const HabitatConfig& cfg, Rng& rng) {
  if (habitats.contains(new_id))
    throw ValidationError("habitat id " + std::to_string(new_id) + " already exists");
  if (strategy == JoinStrategy::Clone && !habitats.contains(clone_of))
    throw LookupError("cannot clone unknown habitat " + std::to_string(clone_of));

  Habitat fresh;
  fresh.id = new_id;
  fresh.community = community;
  Habitat& h = habitats.emplace(new_id, std::move(fresh)).first->second;

  if (strategy == JoinStrategy::Random) {
    std::vector<HabitatId> candidates;
    for (const auto& [id, other] : habitats)
      if (id != new_id) candidates.push_back(id);
    const std::size_t picks = std::min<std::size_t>(cfg.random_join_count, candidates.size());
    for (std::size_t i = 0; i < picks; ++i) {
      const std::size_t j = i + rng.index(candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
      h.add_connection(candidates[i], cfg.initial_probability);
      habitats.at(candidates[i]).add_connection(new_id, cfg.initial_probability);
    }
  } else {
    const Habitat& model = habitats.at(clone_of);
    for (const Connection& c : model.out_connections)
      if (c.to != new_id) h.add_connection(c.to, c.p);
    if (h.find_connection(clone_of) == nullptr)
      h.add_connection(clone_of, cfg.initial_probability);
  }

  // Merge the pools of the initially connected habitats (by agent id, so
  // shared neighbours contribute once).
  std::set<AgentId> seen;
  for (const Connection& c : h.out_connections) {
    for (AgentId id : habitats.at(c.to).pool.agents) {
      if (seen.insert(id).second)
        detail::copy_agent_to(habitats, registry, registry.at(id), new_id, cfg);
    }
  }
  return h;
}

}  // namespace ecosim
