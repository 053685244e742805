#include "quasar/graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace quasar {

BipartiteGraph build_graph(const EvidenceList& pool, const GraphCaps& caps) {
  BipartiteGraph graph;
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pool[a].score > pool[b].score;
  });
  if (order.size() > caps.evidence_cap) order.resize(caps.evidence_cap);

  std::vector<std::string> entities;
  std::unordered_map<std::string, std::size_t> degree;
  std::vector<std::vector<std::string>> mentions(order.size());
  for (std::size_t e = 0; e < order.size(); ++e) {
    std::unordered_set<std::string> seen;
    for (const auto& id : pool[order[e]].entity_ids) {
      if (!seen.insert(id).second) continue;
      mentions[e].push_back(id);
      auto [it, inserted] = degree.try_emplace(id, 0);
      if (inserted) entities.push_back(id);
      ++it->second;
    }
  }

  if (entities.size() > caps.entity_cap) {
    std::vector<std::string> ranked = entities;
    std::sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
      if (degree[a] != degree[b]) return degree[a] > degree[b];
      return a < b;
    });
    ranked.resize(caps.entity_cap);
    std::unordered_set<std::string> kept(ranked.begin(), ranked.end());
    std::erase_if(entities, [&](const std::string& id) { return kept.count(id) == 0; });
  }

  std::unordered_map<std::string, std::size_t> entity_index;
  for (std::size_t n = 0; n < entities.size(); ++n) entity_index.emplace(entities[n], n);

  for (std::size_t e = 0; e < order.size(); ++e) {
    graph.evidence_nodes.push_back(pool[order[e]].id);
    graph.evidence_pool_index.push_back(order[e]);
    for (const auto& id : mentions[e]) {
      auto it = entity_index.find(id);
      if (it != entity_index.end()) graph.edges.emplace_back(e, it->second);
    }
  }
  graph.entity_nodes = std::move(entities);
  return graph;
}

}  // namespace quasar
