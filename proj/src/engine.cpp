#include "quasar/engine.hpp"

#include "quasar/error.hpp"
#include "quasar/io.hpp"
#include "quasar/retrieval.hpp"
#include "quasar/trainer.hpp"

namespace quasar {

Corpus Corpus::load(const std::filesystem::path& dir) {
  Corpus corpus;
  corpus.catalog = std::make_shared<const Catalog>(read_catalog(dir / kCatalogFile));
  corpus.pool = read_pool(dir / kPoolFile);
  if (std::filesystem::exists(dir / kIndexFile)) {
    corpus.index = Bm25Index::load(dir / kIndexFile);
  }
  return corpus;
}

std::shared_ptr<const IntentStage> make_intent_stage(const Config& config,
                                                     const Catalog& catalog) {
  if (config.qu.mode == "model") {
    if (config.qu.si_model_url.empty()) throw ConfigError("qu.si_model_url is not set");
    auto client = std::make_shared<HttpSiModelClient>(config.qu.si_model_url, config.qu.timeout_ms);
    return std::make_shared<ModelIntentStage>(std::move(client), catalog);
  }
  return std::make_shared<RulesIntentStage>(catalog);
}

std::shared_ptr<const EvidenceSource> make_evidence_source(const Config& config,
                                                           const Corpus& corpus) {
  if (corpus.pool.empty()) return std::make_shared<FixedPoolSource>(
      std::unordered_map<std::string, EvidenceList>{});
  std::shared_ptr<Retriever> retriever;
  if (corpus.index) {
    retriever = std::make_shared<Retriever>(corpus.pool, *corpus.index, *corpus.catalog,
                                            config.retrieval);
  } else {
    retriever = std::make_shared<Retriever>(corpus.pool, *corpus.catalog, config.retrieval);
  }
  return std::make_shared<RetrieverSource>(std::move(retriever));
}

std::shared_ptr<const EvidenceScorer> make_scorer(const Config& config, const Catalog& catalog) {
  const auto& r = config.rerank;
  if (r.mode == "bm25") return std::make_shared<PassthroughScorer>();
  if (r.mode == "gnn") {
    if (r.checkpoint.empty()) throw ConfigError("rerank.checkpoint is required for gnn re-ranking");
    auto models = load_checkpoint(std::filesystem::path(r.checkpoint));
    return std::make_shared<GnnScorer>(std::move(models), catalog, r.inference_caps);
  }
  std::vector<std::shared_ptr<const CrossEncoderClient>> clients;
  for (const auto* url : {&r.stage1_scorer_url, &r.stage2_scorer_url}) {
    if (url->empty()) {
      clients.push_back(nullptr);
    } else {
      clients.push_back(std::make_shared<HttpCrossEncoderClient>(*url, r.timeout_ms));
    }
  }
  if (!clients[0] && !clients[1]) clients.clear();
  return std::make_shared<CeScorer>(std::move(clients));
}

std::shared_ptr<const AnswerStage> make_answer_stage(const Config& config,
                                                     const Catalog& catalog) {
  const auto& a = config.answer;
  if (a.generator == "remote") {
    if (a.generator_url.empty()) {
      throw ConfigError("remote generator needs answer.generator_url or QUASAR_GENERATOR_URL");
    }
    auto client = std::make_shared<HttpGeneratorClient>(a.generator_url, a.timeout_ms);
    return std::make_shared<RemoteAnswerStage>(std::move(client), catalog, a.max_answer_tokens,
                                               a.fallback_to_oracle);
  }
  return std::make_shared<OracleAnswerStage>(catalog);
}

Pipeline make_pipeline(const Config& config, const Catalog& catalog,
                       std::shared_ptr<const EvidenceSource> source) {
  config.validate();
  return Pipeline(catalog, make_intent_stage(config, catalog), std::move(source),
                  config.schedule(), make_scorer(config, catalog),
                  make_answer_stage(config, catalog));
}

}  // namespace quasar
