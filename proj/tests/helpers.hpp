#pragma once

// Shared fixtures for the test suites: a small agent table with resolver and
// usage callables matching what the library expects.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ecosim/core.hpp"

namespace testutil {

struct AgentTable {
  std::unordered_map<ecosim::AgentId, ecosim::SemanticDescription> descriptions;
  std::unordered_map<ecosim::AgentId, std::uint64_t> use_counts;

  void add(ecosim::AgentId id, std::vector<ecosim::Token> tokens, std::uint64_t uses = 0) {
    descriptions.emplace(id, ecosim::SemanticDescription(std::move(tokens)));
    use_counts[id] = uses;
  }

  auto resolver() const {
    return [this](ecosim::AgentId id) -> const ecosim::SemanticDescription* {
      auto it = descriptions.find(id);
      return it == descriptions.end() ? nullptr : &it->second;
    };
  }

  auto usage() const {
    return [this](ecosim::AgentId id) -> std::uint64_t {
      auto it = use_counts.find(id);
      return it == use_counts.end() ? 0 : it->second;
    };
  }

  std::vector<ecosim::AgentId> ids() const {
    std::vector<ecosim::AgentId> out;
    for (const auto& [id, d] : descriptions) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline ecosim::Request make_request(std::vector<ecosim::Token> tokens,
                                    ecosim::HabitatId origin = 0, ecosim::Round round = 0) {
  ecosim::Request req;
  req.description = ecosim::SemanticDescription(std::move(tokens));
  req.origin_habitat = origin;
  req.round = round;
  return req;
}

inline ecosim::AgentSequence seq_of(std::vector<ecosim::AgentId> agents) {
  ecosim::AgentSequence s;
  s.agents = std::move(agents);
  return s;
}

}  // namespace testutil
