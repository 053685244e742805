#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "quasar/answer.hpp"
#include "quasar/core.hpp"
#include "quasar/intent.hpp"
#include "quasar/rerank.hpp"
#include "quasar/retrieval.hpp"

namespace quasar {

// Question understanding stage.
class IntentStage {
 public:
  virtual ~IntentStage() = default;
  virtual StructuredIntent understand(const Question& q) const = 0;
};

class RulesIntentStage : public IntentStage {
 public:
  explicit RulesIntentStage(const Catalog& catalog) : catalog_(&catalog) {}
  StructuredIntent understand(const Question& q) const override {
    return generate_si_rules(q, *catalog_);
  }

 private:
  const Catalog* catalog_;
};

class ModelIntentStage : public IntentStage {
 public:
  ModelIntentStage(std::shared_ptr<SiModelClient> client, const Catalog& catalog)
      : client_(std::move(client)), catalog_(&catalog) {}
  StructuredIntent understand(const Question& q) const override {
    return generate_si_model(q, *client_, *catalog_);
  }

 private:
  std::shared_ptr<SiModelClient> client_;
  const Catalog* catalog_;
};

// Intents fixed ahead of time, keyed by question id; unknown ids fall back to
// the rules generator.
class FixedIntentStage : public IntentStage {
 public:
  FixedIntentStage(std::unordered_map<std::string, StructuredIntent> intents,
                   const Catalog& catalog)
      : intents_(std::move(intents)), catalog_(&catalog) {}
  StructuredIntent understand(const Question& q) const override;

 private:
  std::unordered_map<std::string, StructuredIntent> intents_;
  const Catalog* catalog_;
};

// Evidence retrieval stage: returns a ranked, scored pool.
class EvidenceSource {
 public:
  virtual ~EvidenceSource() = default;
  virtual EvidenceList retrieve(const Question& q, const StructuredIntent& si) const = 0;
};

class RetrieverSource : public EvidenceSource {
 public:
  explicit RetrieverSource(std::shared_ptr<const Retriever> retriever)
      : retriever_(std::move(retriever)) {}
  EvidenceList retrieve(const Question& q, const StructuredIntent& si) const override {
    return retriever_->retrieve(q, si);
  }

 private:
  std::shared_ptr<const Retriever> retriever_;
};

// Pre-ranked pools keyed by question id (synthetic benchmarks, replays).
class FixedPoolSource : public EvidenceSource {
 public:
  explicit FixedPoolSource(std::unordered_map<std::string, EvidenceList> pools)
      : pools_(std::move(pools)) {}
  EvidenceList retrieve(const Question& q, const StructuredIntent& si) const override;

 private:
  std::unordered_map<std::string, EvidenceList> pools_;
};

// Answer generation stage.
class AnswerStage {
 public:
  virtual ~AnswerStage() = default;
  virtual std::string answer(const StructuredIntent& si, const Question& q,
                             const EvidenceList& evidence) const = 0;
};

class OracleAnswerStage : public AnswerStage {
 public:
  explicit OracleAnswerStage(const Catalog& catalog) : catalog_(&catalog) {}
  std::string answer(const StructuredIntent& si, const Question& q,
                     const EvidenceList& evidence) const override;

 private:
  const Catalog* catalog_;
};

// Remote generator; on transport failure either rethrows or, when
// fallback_to_oracle is set, warns and answers with the extractive oracle.
class RemoteAnswerStage : public AnswerStage {
 public:
  RemoteAnswerStage(std::shared_ptr<GeneratorClient> client, const Catalog& catalog,
                    int max_answer_tokens, bool fallback_to_oracle);
  std::string answer(const StructuredIntent& si, const Question& q,
                     const EvidenceList& evidence) const override;

 private:
  std::shared_ptr<GeneratorClient> client_;
  const Catalog* catalog_;
  int max_answer_tokens_;
  bool fallback_;
};

struct PipelineTrace {
  StructuredIntent si;
  EvidenceList pool;
  // Output of every pruning stage, in order.
  std::vector<EvidenceList> stage_outputs;
  EvidenceList final_evidence;
  AnswerResult result;
};

// Question understanding, evidence retrieval, re-ranking and filtering, and
// answer generation. Stateless after construction; run() may be called from
// several threads when every stage is thread-safe.
class Pipeline {
 public:
  Pipeline(const Catalog& catalog, std::shared_ptr<const IntentStage> intent,
           std::shared_ptr<const EvidenceSource> source, RerankSchedule schedule,
           std::shared_ptr<const EvidenceScorer> scorer,
           std::shared_ptr<const AnswerStage> answerer);

  PipelineTrace run(const Question& q) const;

  const Catalog& catalog() const { return *catalog_; }
  const RerankSchedule& schedule() const { return schedule_; }

 private:
  const Catalog* catalog_;
  std::shared_ptr<const IntentStage> intent_;
  std::shared_ptr<const EvidenceSource> source_;
  RerankSchedule schedule_;
  std::shared_ptr<const EvidenceScorer> scorer_;
  std::shared_ptr<const AnswerStage> answerer_;
};

}  // namespace quasar
