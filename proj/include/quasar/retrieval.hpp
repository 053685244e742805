#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quasar/bm25.hpp"
#include "quasar/core.hpp"

namespace quasar {

struct RetrievalConfig {
  int anchor_k = 10;
  int pool_p = 1000;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
  Bm25Params bm25() const { return {bm25_k1, bm25_b}; }
};

// Lexical anchoring: for each entity, the best ratio over its names of
// |name tokens in query| / |name tokens|. Zero-score entities are dropped;
// ties go to the name with fewer tokens, then the smaller id.
std::vector<Entity> anchor_entities(std::string_view query, const Catalog& catalog,
                                    int k);

// Swappable disambiguation backend for the anchoring step.
class EntityAnchorer {
 public:
  virtual ~EntityAnchorer() = default;
  virtual std::vector<Entity> anchor(std::string_view query, int k) const = 0;
};

class LexicalAnchorer : public EntityAnchorer {
 public:
  explicit LexicalAnchorer(const Catalog& catalog) : catalog_(&catalog) {}
  std::vector<Entity> anchor(std::string_view query, int k) const override {
    return anchor_entities(query, *catalog_, k);
  }

 private:
  const Catalog* catalog_;
};

// Pieces whose page title equals an anchor label (case-insensitive) or whose
// entity mentions intersect the anchors. No anchors means no scoping.
EvidenceList scope_evidence(const std::vector<Entity>& anchors, const EvidenceList& pool);

// Evidence retrieval over an ingested pool and its BM25 index.
//
// The query is si_concat(si, question). Candidates are the anchor-scoped pieces
// united with the global BM25 hits; all are scored with the same global BM25
// statistics regardless of source type and the top pool_p are returned with
// their scores attached. Scoped pieces without any query term keep score 0 and
// rank after every matching piece.
class Retriever {
 public:
  // index must have been built over exactly this pool (same ids, same order).
  Retriever(EvidenceList pool, Bm25Index index, const Catalog& catalog,
            RetrievalConfig config);

  // Builds the index from the pool. An empty pool yields a retriever that
  // always returns an empty list.
  Retriever(EvidenceList pool, const Catalog& catalog, RetrievalConfig config);

  EvidenceList retrieve(const Question& q, const StructuredIntent& si) const;

  void set_anchorer(std::shared_ptr<const EntityAnchorer> anchorer);

  const EvidenceList& pool() const { return pool_; }
  const Bm25Index& index() const { return index_; }
  const RetrievalConfig& config() const { return config_; }

 private:
  EvidenceList pool_;
  Bm25Index index_;
  const Catalog* catalog_;
  RetrievalConfig config_;
  std::shared_ptr<const EntityAnchorer> anchorer_;
  std::unordered_map<std::string, std::size_t> position_;
};

}  // namespace quasar
