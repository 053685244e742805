#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "quasar/bm25.hpp"
#include "quasar/config.hpp"
#include "quasar/core.hpp"
#include "quasar/pipeline.hpp"

namespace quasar {

// An ingested corpus directory: catalog.jsonl, pool.jsonl and, when present,
// index.jsonl.
struct Corpus {
  std::shared_ptr<const Catalog> catalog;
  EvidenceList pool;
  std::optional<Bm25Index> index;

  static Corpus load(const std::filesystem::path& dir);
};

inline constexpr const char* kCatalogFile = "catalog.jsonl";
inline constexpr const char* kPoolFile = "pool.jsonl";
inline constexpr const char* kIndexFile = "index.jsonl";

std::shared_ptr<const IntentStage> make_intent_stage(const Config& config,
                                                     const Catalog& catalog);
// BM25 retrieval over the corpus; an empty pool yields an empty source.
std::shared_ptr<const EvidenceSource> make_evidence_source(const Config& config,
                                                           const Corpus& corpus);
// Throws ConfigError when the GNN mode lacks a checkpoint.
std::shared_ptr<const EvidenceScorer> make_scorer(const Config& config, const Catalog& catalog);
std::shared_ptr<const AnswerStage> make_answer_stage(const Config& config,
                                                     const Catalog& catalog);

Pipeline make_pipeline(const Config& config, const Catalog& catalog,
                       std::shared_ptr<const EvidenceSource> source);

}  // namespace quasar
