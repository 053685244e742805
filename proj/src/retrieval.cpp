#include "quasar/retrieval.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "quasar/error.hpp"
#include "quasar/text.hpp"

namespace quasar {

void RetrievalConfig::validate() const {
  if (anchor_k < 1) throw ConfigError("retrieval.anchor_k must be >= 1");
  if (pool_p < 1) throw ConfigError("retrieval.pool_p must be >= 1");
  if (!(bm25_k1 > 0.0)) throw ConfigError("retrieval.bm25_k1 must be > 0");
  if (!(bm25_b >= 0.0 && bm25_b <= 1.0)) throw ConfigError("retrieval.bm25_b must be in [0, 1]");
}

std::vector<Entity> anchor_entities(std::string_view query, const Catalog& catalog,
                                    int k) {
  struct Candidate {
    const Entity* entity;
    double score;
    std::size_t name_tokens;
  };
  std::vector<std::string> qt = tokenize(query);
  std::unordered_set<std::string> query_tokens(qt.begin(), qt.end());
  std::vector<Candidate> candidates;
  if (query_tokens.empty() || k < 1) return {};

  for (const auto& entity : catalog.entities()) {
    Candidate best{&entity, 0.0, 0};
    for (const auto& name : entity.names()) {
      std::vector<std::string> nt = tokenize(name);
      std::unordered_set<std::string> name_tokens(nt.begin(), nt.end());
      if (name_tokens.empty()) continue;
      std::size_t hits = 0;
      for (const auto& t : name_tokens) hits += query_tokens.count(t);
      double ratio = static_cast<double>(hits) / static_cast<double>(name_tokens.size());
      if (ratio > best.score ||
          (ratio == best.score && ratio > 0.0 && name_tokens.size() < best.name_tokens)) {
        best = {&entity, ratio, name_tokens.size()};
      }
    }
    if (best.score > 0.0) candidates.push_back(best);
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.name_tokens != b.name_tokens) return a.name_tokens < b.name_tokens;
    return a.entity->id < b.entity->id;
  });
  if (candidates.size() > static_cast<std::size_t>(k)) candidates.resize(k);
  std::vector<Entity> out;
  for (const auto& c : candidates) out.push_back(*c.entity);
  return out;
}

namespace {

std::vector<std::size_t> scope_indices(const std::vector<Entity>& anchors,
                                       const EvidenceList& pool) {
  std::vector<std::size_t> out;
  if (anchors.empty()) {
    out.resize(pool.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> titles;
  for (const auto& a : anchors) {
    ids.insert(a.id);
    titles.insert(to_lower(a.label));
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& piece = pool[i];
    bool hit = piece.source != SourceType::kKg &&
               titles.count(to_lower(piece.provenance.title)) > 0;
    for (const auto& id : piece.entity_ids) hit = hit || ids.count(id) > 0;
    if (hit) out.push_back(i);
  }
  return out;
}

}  // namespace

EvidenceList scope_evidence(const std::vector<Entity>& anchors, const EvidenceList& pool) {
  EvidenceList out;
  for (auto i : scope_indices(anchors, pool)) out.push_back(pool[i]);
  return out;
}

Retriever::Retriever(EvidenceList pool, Bm25Index index, const Catalog& catalog,
                     RetrievalConfig config)
    : pool_(std::move(pool)),
      index_(std::move(index)),
      catalog_(&catalog),
      config_(config),
      anchorer_(std::make_shared<LexicalAnchorer>(catalog)) {
  config_.validate();
  for (std::size_t i = 0; i < pool_.size(); ++i) position_.emplace(pool_[i].id, i);
  if (index_.doc_count() != pool_.size()) {
    throw ConfigError("index covers " + std::to_string(index_.doc_count()) +
                      " pieces but the pool has " + std::to_string(pool_.size()));
  }
  for (std::size_t i = 0; i < pool_.size(); ++i) {
    if (index_.doc_ids()[i] != pool_[i].id) {
      throw ConfigError("index and pool disagree at position " + std::to_string(i));
    }
  }
}

Retriever::Retriever(EvidenceList pool, const Catalog& catalog, RetrievalConfig config)
    : pool_(std::move(pool)),
      catalog_(&catalog),
      config_(config),
      anchorer_(std::make_shared<LexicalAnchorer>(catalog)) {
  config_.validate();
  for (std::size_t i = 0; i < pool_.size(); ++i) position_.emplace(pool_[i].id, i);
  if (!pool_.empty()) index_ = Bm25Index::build(pool_, config_.bm25());
}

void Retriever::set_anchorer(std::shared_ptr<const EntityAnchorer> anchorer) {
  anchorer_ = std::move(anchorer);
}

EvidenceList Retriever::retrieve(const Question& q, const StructuredIntent& si) const {
  if (pool_.empty()) return {};
  const std::string query = si_concat(si, q.text);
  const auto limit = static_cast<std::size_t>(config_.pool_p);

  std::vector<Entity> anchors = anchorer_->anchor(query, config_.anchor_k);
  std::vector<std::string> terms = Bm25Index::query_terms(query);

  struct Ranked {
    std::size_t index;
    double score;
  };
  std::vector<Ranked> ranked;
  std::vector<bool> included(pool_.size(), false);
  for (const auto& hit : index_.search(query, limit)) {
    std::size_t i = position_.at(hit.id);
    if (included[i]) continue;
    included[i] = true;
    ranked.push_back({i, hit.score});
  }
  // Scoping only adds pieces when anchoring found something.
  if (!anchors.empty()) {
    for (auto i : scope_indices(anchors, pool_)) {
      if (included[i]) continue;
      included[i] = true;
      ranked.push_back({i, index_.score(static_cast<std::uint32_t>(i), terms)});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [&](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    return pool_[a.index].id < pool_[b.index].id;
  });
  if (ranked.size() > limit) ranked.resize(limit);

  EvidenceList out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) {
    out.push_back(pool_[r.index]);
    out.back().score = r.score;
  }
  return out;
}

}  // namespace quasar
