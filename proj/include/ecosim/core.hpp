#pragma once

// Domain types shared by every other module: token-set descriptions, user
// requests, agents, agent sequences, and the pure matching arithmetic
// (coverage / redundancy) that fitness evaluation is built on.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ecosim/errors.hpp"

namespace ecosim {

using AgentId = std::uint64_t;
using HabitatId = std::uint32_t;
using CommunityId = std::uint32_t;
using Round = std::uint32_t;
using Token = std::uint32_t;

// Immutable set of attribute tokens over a finite integer alphabet. Stands in
// for a service's semantic description; a request body uses the same shape.
// Tokens are kept sorted and unique, with a bitmask mirror for fast set ops.
class SemanticDescription {
public:
  SemanticDescription() = default;

  explicit SemanticDescription(std::vector<Token> tokens) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    if (tokens.empty()) throw ValidationError("semantic description must be non-empty");
    tokens_ = std::move(tokens);
    words_.assign(tokens_.back() / 64 + 1, 0);
    for (Token t : tokens_) words_[t / 64] |= std::uint64_t{1} << (t % 64);
  }

  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  std::span<const std::uint64_t> words() const { return words_; }

  bool contains(Token t) const {
    const std::size_t w = t / 64;
    return w < words_.size() && (words_[w] >> (t % 64)) & 1;
  }

  bool intersects(const SemanticDescription& other) const {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  friend bool operator==(const SemanticDescription& a, const SemanticDescription& b) {
    return a.tokens_ == b.tokens_;
  }
  friend auto operator<=>(const SemanticDescription& a, const SemanticDescription& b) {
    return a.tokens_ <=> b.tokens_;
  }

private:
  std::vector<Token> tokens_;
  std::vector<std::uint64_t> words_;
};

// Checked construction against a concrete alphabet size.
inline SemanticDescription validate_description(const std::vector<Token>& tokens,
                                                std::uint32_t alphabet_size) {
  if (tokens.empty()) throw ValidationError("semantic description must be non-empty");
  for (Token t : tokens) {
    if (t >= alphabet_size) {
      throw ValidationError("token " + std::to_string(t) + " outside alphabet [0, " +
                            std::to_string(alphabet_size) + ")");
    }
  }
  return SemanticDescription(tokens);
}

// A user request: a semantic description of the desired application, plus
// where and when it was raised.
struct Request {
  SemanticDescription description;
  HabitatId origin_habitat = 0;
  Round round = 0;
};

// Lightweight stand-in for a deployed software service. The description is
// the genotype; usage counters supply the phenotype signal as it accrues.
struct Agent {
  AgentId id = 0;
  SemanticDescription description;
  HabitatId owner = 0;  // habitat that deployed the lineage
  std::uint64_t uses = 0;
  std::uint32_t requests_seen_unused = 0;
  std::uint32_t escapes_remaining = 0;
  std::vector<HabitatId> migration_history;  // front() = creation habitat
  bool alive = true;

  HabitatId creation_habitat() const { return migration_history.front(); }
  HabitatId current_habitat() const { return migration_history.back(); }
};

// Ordered, repetition-allowing list of agent ids: the evolving genotype.
// provenance records the habitats where this sequence (or a registered
// ancestor it was recombined from) was evolved.
struct AgentSequence {
  std::vector<AgentId> agents;
  std::vector<HabitatId> provenance;  // sorted, unique

  std::size_t length() const { return agents.size(); }
};

inline void add_provenance(AgentSequence& seq, HabitatId h) {
  auto it = std::lower_bound(seq.provenance.begin(), seq.provenance.end(), h);
  if (it == seq.provenance.end() || *it != h) seq.provenance.insert(it, h);
}

inline std::vector<HabitatId> merge_provenance(const std::vector<HabitatId>& a,
                                               const std::vector<HabitatId>& b) {
  std::vector<HabitatId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace detail {

// Resolve must be callable as resolve(id) -> const SemanticDescription*
// (nullptr for unknown ids).
template <class Resolve>
const SemanticDescription& resolve_or_throw(Resolve&& resolve, AgentId id) {
  const SemanticDescription* d = resolve(id);
  if (d == nullptr) throw LookupError("unresolvable agent id " + std::to_string(id));
  return *d;
}

}  // namespace detail

// |(union of member descriptions) ∩ request tokens|. Pure; result is in
// [0, |request tokens|].
template <class Resolve>
std::size_t coverage(const AgentSequence& seq, const Request& req, Resolve&& resolve) {
  const auto req_words = req.description.words();
  if (req_words.size() == 1) {  // common case: alphabet <= 64
    std::uint64_t acc = 0;
    for (AgentId id : seq.agents) {
      const auto words = detail::resolve_or_throw(resolve, id).words();
      if (!words.empty()) acc |= words[0];
    }
    return static_cast<std::size_t>(std::popcount(acc & req_words[0]));
  }
  thread_local std::vector<std::uint64_t> acc;
  acc.assign(req_words.size(), 0);
  for (AgentId id : seq.agents) {
    const auto words = detail::resolve_or_throw(resolve, id).words();
    const std::size_t n = std::min(words.size(), acc.size());
    for (std::size_t i = 0; i < n; ++i) acc[i] |= words[i];
  }
  std::size_t covered = 0;
  for (std::size_t i = 0; i < acc.size(); ++i)
    covered += static_cast<std::size_t>(std::popcount(acc[i] & req_words[i]));
  return covered;
}

// Number of agents that can be deleted without reducing the sequence's full
// coverage. Single-deletion test applied left to right: a position found
// redundant is dropped before the next one is tested, so duplicated
// contributors are counted once per removable copy, not per occurrence.
template <class Resolve>
std::size_t redundant_count(const AgentSequence& seq, const Request& req, Resolve&& resolve) {
  const std::size_t full = coverage(seq, req, resolve);
  AgentSequence kept;
  kept.agents = seq.agents;
  std::size_t redundant = 0;
  std::size_t i = 0;
  while (i < kept.agents.size()) {
    AgentSequence probe;
    probe.agents.reserve(kept.agents.size());
    for (std::size_t j = 0; j < kept.agents.size(); ++j)
      if (j != i) probe.agents.push_back(kept.agents[j]);
    if (coverage(probe, req, resolve) == full) {
      kept.agents = std::move(probe.agents);
      ++redundant;
    } else {
      ++i;
    }
  }
  return redundant;
}

}  // namespace ecosim
