#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "quasar/core.hpp"

namespace quasar {

struct GraphCaps {
  std::size_t evidence_cap = 1000;
  std::size_t entity_cap = 4000;
};

// Evidence/entity occurrence graph. Edge (e, n) exists iff entity_nodes[n] is
// mentioned by evidence_nodes[e].
struct BipartiteGraph {
  std::vector<std::string> evidence_nodes;
  // Position of each evidence node in the pool the graph was built from.
  std::vector<std::size_t> evidence_pool_index;
  std::vector<std::string> entity_nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t node_count() const { return evidence_nodes.size() + entity_nodes.size(); }
};

// Evidence nodes: the pool ordered by descending score (stable on pool rank)
// and cut to evidence_cap. Entity nodes: the union of their mentions in
// first-occurrence order; above entity_cap the lowest-degree entities (ties:
// larger id) are dropped along with their edges.
BipartiteGraph build_graph(const EvidenceList& pool, const GraphCaps& caps);

}  // namespace quasar
