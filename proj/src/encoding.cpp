#include "quasar/encoding.hpp"

#include <stdexcept>

#include "quasar/text.hpp"

namespace quasar {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

HashedBowEncoder::HashedBowEncoder(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("encoder dimension must be positive");
}

Eigen::MatrixXd HashedBowEncoder::encode(const std::vector<std::string>& node_texts,
                                         std::string_view intent_text) const {
  const std::vector<std::string> intent_tokens = tokenize(intent_text);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(node_texts.size()), dim_);
  for (std::size_t i = 0; i < node_texts.size(); ++i) {
    std::vector<std::string> tokens = tokenize(node_texts[i]);
    tokens.insert(tokens.end(), intent_tokens.begin(), intent_tokens.end());
    out.row(static_cast<Eigen::Index>(i)) = hashed_bag_of_words<double>(tokens, dim_).transpose();
  }
  return out;
}

Eigen::MatrixXd encode_nodes(const BipartiteGraph& graph, const StructuredIntent& si,
                             std::string_view question, const EvidenceList& pool,
                             const Catalog& catalog, const NodeEncoder& encoder) {
  std::vector<std::string> texts;
  texts.reserve(graph.node_count());
  for (auto index : graph.evidence_pool_index) texts.push_back(pool.at(index).text);
  for (const auto& id : graph.entity_nodes) {
    const Entity* e = catalog.find(id);
    texts.push_back(e != nullptr ? e->label : id);
  }
  return encoder.encode(texts, si_concat(si, question));
}

}  // namespace quasar
