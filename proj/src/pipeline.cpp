#include "quasar/pipeline.hpp"

#include "quasar/error.hpp"
#include "quasar/http.hpp"

namespace quasar {

StructuredIntent FixedIntentStage::understand(const Question& q) const {
  auto it = intents_.find(q.id);
  if (it != intents_.end()) return it->second;
  return generate_si_rules(q, *catalog_);
}

EvidenceList FixedPoolSource::retrieve(const Question& q, const StructuredIntent&) const {
  auto it = pools_.find(q.id);
  if (it == pools_.end()) return {};
  return it->second;
}

std::string OracleAnswerStage::answer(const StructuredIntent& si, const Question&,
                                      const EvidenceList& evidence) const {
  return extractive_oracle_generate(si, evidence, *catalog_);
}

RemoteAnswerStage::RemoteAnswerStage(std::shared_ptr<GeneratorClient> client,
                                     const Catalog& catalog, int max_answer_tokens,
                                     bool fallback_to_oracle)
    : client_(std::move(client)),
      catalog_(&catalog),
      max_answer_tokens_(max_answer_tokens),
      fallback_(fallback_to_oracle) {}

std::string RemoteAnswerStage::answer(const StructuredIntent& si, const Question& q,
                                      const EvidenceList& evidence) const {
  GeneratorRequest request{build_prompt(si, q.text, evidence), max_answer_tokens_};
  try {
    return generate(*client_, request);
  } catch (const TransportError& e) {
    if (!fallback_) throw;
    log_warning(std::string("generator unavailable (") + e.what() +
                "), using the extractive oracle");
    return extractive_oracle_generate(si, evidence, *catalog_);
  }
}

Pipeline::Pipeline(const Catalog& catalog, std::shared_ptr<const IntentStage> intent,
                   std::shared_ptr<const EvidenceSource> source, RerankSchedule schedule,
                   std::shared_ptr<const EvidenceScorer> scorer,
                   std::shared_ptr<const AnswerStage> answerer)
    : catalog_(&catalog),
      intent_(std::move(intent)),
      source_(std::move(source)),
      schedule_(std::move(schedule)),
      scorer_(std::move(scorer)),
      answerer_(std::move(answerer)) {
  if (!intent_ || !source_ || !scorer_ || !answerer_) {
    throw ConfigError("pipeline stages must all be set");
  }
}

PipelineTrace Pipeline::run(const Question& q) const {
  PipelineTrace trace;
  trace.si = intent_->understand(q);
  trace.pool = source_->retrieve(q, trace.si);
  trace.final_evidence =
      run_schedule(trace.si, q.text, trace.pool, schedule_, *scorer_, &trace.stage_outputs);
  std::string answer = answerer_->answer(trace.si, q, trace.final_evidence);
  trace.result = attach_support(answer, trace.final_evidence, *catalog_);
  return trace;
}

}  // namespace quasar
