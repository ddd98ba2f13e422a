#pragma once

// Graph and ecosystem measurements: small-world statistics of the effective
// topology, community alignment of connection mass, and CSV export.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecosim/habitat.hpp"

namespace ecosim {

struct UndirectedGraph {
  std::vector<HabitatId> nodes;  // sorted
  std::map<HabitatId, std::set<HabitatId>> adj;

  std::size_t edge_count() const {
    std::size_t degree_sum = 0;
    for (const auto& [id, nbrs] : adj) degree_sum += nbrs.size();
    return degree_sum / 2;
  }
};

// Undirected projection of the directed topology: edge {a,b} iff either
// direction carries probability >= p_min.
inline UndirectedGraph effective_graph(const HabitatMap& habitats, double p_min) {
  UndirectedGraph g;
  for (const auto& [id, h] : habitats) {
    g.nodes.push_back(id);
    g.adj[id];
  }
  for (const auto& [id, h] : habitats) {
    for (const Connection& c : h.out_connections) {
      if (c.p >= p_min && g.adj.contains(c.to)) {
        g.adj[c.from].insert(c.to);
        g.adj[c.to].insert(c.from);
      }
    }
  }
  return g;
}

// Watts-Strogatz local coefficient averaged over nodes; nodes of degree < 2
// contribute 0. Empty graph yields 0.
inline double clustering_coefficient(const UndirectedGraph& g) {
  if (g.nodes.empty()) return 0.0;
  double sum = 0.0;
  for (HabitatId v : g.nodes) {
    const auto& nbrs = g.adj.at(v);
    const std::size_t deg = nbrs.size();
    if (deg < 2) continue;
    std::size_t links = 0;
    for (auto it = nbrs.begin(); it != nbrs.end(); ++it) {
      auto jt = it;
      for (++jt; jt != nbrs.end(); ++jt)
        if (g.adj.at(*it).contains(*jt)) ++links;
    }
    sum += 2.0 * static_cast<double>(links) /
           (static_cast<double>(deg) * static_cast<double>(deg - 1));
  }
  return sum / static_cast<double>(g.nodes.size());
}

// Mean shortest-path length over node pairs of the largest connected
// component; nullopt when that component is a single node (or the graph is
// empty). Ties between components go to the one containing the smallest id.
inline std::optional<double> characteristic_path_length(const UndirectedGraph& g) {
  if (g.nodes.empty()) return std::nullopt;
  std::map<HabitatId, int> component;
  int comp_count = 0;
  std::vector<std::size_t> comp_size;
  for (HabitatId start : g.nodes) {
    if (component.contains(start)) continue;
    const int comp = comp_count++;
    comp_size.push_back(0);
    std::vector<HabitatId> queue{start};
    component[start] = comp;
    while (!queue.empty()) {
      const HabitatId cur = queue.back();
      queue.pop_back();
      ++comp_size[comp];
      for (HabitatId next : g.adj.at(cur)) {
        if (!component.contains(next)) {
          component[next] = comp;
          queue.push_back(next);
        }
      }
    }
  }
  int largest = 0;
  for (int c = 1; c < comp_count; ++c)
    if (comp_size[c] > comp_size[largest]) largest = c;
  if (comp_size[largest] < 2) return std::nullopt;

  std::vector<HabitatId> members;
  for (HabitatId v : g.nodes)
    if (component.at(v) == largest) members.push_back(v);

  double dist_sum = 0.0;
  for (HabitatId source : members) {
    std::map<HabitatId, std::size_t> dist;
    dist[source] = 0;
    std::vector<HabitatId> frontier{source};
    std::size_t level = 0;
    while (!frontier.empty()) {
      ++level;
      std::vector<HabitatId> next_frontier;
      for (HabitatId cur : frontier) {
        for (HabitatId next : g.adj.at(cur)) {
          if (!dist.contains(next)) {
            dist[next] = level;
            next_frontier.push_back(next);
          }
        }
      }
      frontier = std::move(next_frontier);
    }
    for (HabitatId target : members)
      if (target > source) dist_sum += static_cast<double>(dist.at(target));
  }
  const double pairs =
      static_cast<double>(members.size()) * static_cast<double>(members.size() - 1) / 2.0;
  return dist_sum / pairs;
}

// Share of directed connection probability mass whose endpoints lie in the
// same community. Zero connections yields 0.
inline double intra_community_mass(const HabitatMap& habitats) {
  double intra = 0.0, total = 0.0;
  for (const auto& [id, h] : habitats) {
    for (const Connection& c : h.out_connections) {
      total += c.p;
      auto it = habitats.find(c.to);
      if (it != habitats.end() && it->second.community == h.community) intra += c.p;
    }
  }
  return total == 0.0 ? 0.0 : intra / total;
}

struct MetricsRow {
  Round round = 0;
  std::uint64_t executed_count = 0;
  double mean_best_fitness = 0.0;
  double mean_generations_to_threshold = 0.0;  // executed requests only
  double clustering_coefficient = 0.0;
  std::optional<double> characteristic_path_length;  // nullopt = sentinel
  double intra_community_mass = 0.0;
  std::uint64_t agent_count = 0;
  double mean_sequence_length = 0.0;
  double pool_diversity = 0.0;
};

inline constexpr const char* kMetricsCsvHeader =
    "round,executed_count,mean_best_fitness,mean_generations_to_threshold,"
    "clustering_coefficient,characteristic_path_length,intra_community_mass,"
    "agent_count,mean_sequence_length,pool_diversity";

inline std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = kMetricsCsvHeader;
  out += '\n';
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out += buf;
  };
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.round);
    out += ',';
    out += std::to_string(r.executed_count);
    out += ',';
    real(r.mean_best_fitness);
    out += ',';
    real(r.mean_generations_to_threshold);
    out += ',';
    real(r.clustering_coefficient);
    out += ',';
    if (r.characteristic_path_length) real(*r.characteristic_path_length);
    out += ',';
    real(r.intra_community_mass);
    out += ',';
    out += std::to_string(r.agent_count);
    out += ',';
    real(r.mean_sequence_length);
    out += ',';
    real(r.pool_diversity);
    out += '\n';
  }
  return out;
}

inline void export_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << metrics_csv(rows);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace ecosim
