#include "quasar/training.hpp"

#include "quasar/error.hpp"

namespace quasar {

LabeledPool label_question(const IntentStage& intent, const EvidenceSource& source,
                           const Question& q) {
  LabeledPool item;
  item.id = q.id;
  item.question = q.text;
  item.gold_answers = q.gold_answers;
  item.si = intent.understand(q);
  item.pool = source.retrieve(q, item.si);
  return item;
}

namespace {

// Input list of `stage`: the pool cut through the already trained stages.
EvidenceList stage_input(const LabeledPool& item, const std::vector<RerankStage>& stages,
                         std::size_t stage, const std::vector<GnnModel<double>>& models,
                         const Catalog& catalog, const RerankTrainingOptions& options) {
  EvidenceList input = item.pool;
  if (stage == 0) {
    if (input.size() > stages[0].input_k) input.resize(stages[0].input_k);
    return input;
  }
  GnnScorer scorer(models, catalog, options.inference_caps);
  std::vector<RerankStage> prefix(stages.begin(), stages.begin() + static_cast<long>(stage));
  return run_schedule(item.si, item.question, input,
                      RerankSchedule(prefix, options.inference_caps), scorer);
}

std::vector<TrainingExample> examples_for(const std::vector<LabeledPool>& items,
                                          std::size_t stage,
                                          const std::vector<GnnModel<double>>& models,
                                          const Catalog& catalog,
                                          const RerankTrainingOptions& options,
                                          const NodeEncoder& encoder) {
  std::vector<TrainingExample> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    if (item.pool.empty()) continue;
    EvidenceList input = stage_input(item, options.stages, stage, models, catalog, options);
    out.push_back(make_training_example(item.si, item.question, input, item.gold_answers,
                                        catalog, options.training_caps, encoder));
  }
  return out;
}

}  // namespace

std::vector<GnnModel<double>> train_rerankers(const std::vector<LabeledPool>& train,
                                              const std::vector<LabeledPool>& dev,
                                              const Catalog& catalog,
                                              const RerankTrainingOptions& options,
                                              std::vector<TrainResult>* results) {
  if (options.stages.empty()) throw ConfigError("GNN training needs at least one stage");
  RerankSchedule check(options.stages, options.inference_caps);
  HashedBowEncoder encoder(options.dim);
  std::vector<GnnModel<double>> models;
  if (results != nullptr) results->clear();
  for (std::size_t s = 0; s < options.stages.size(); ++s) {
    auto train_set = examples_for(train, s, models, catalog, options, encoder);
    auto dev_set = examples_for(dev, s, models, catalog, options, encoder);
    auto initial = GnnModel<double>::initialize(options.layers, options.dim, options.seed + s);
    TrainResult result = gnn_train(initial, train_set, dev_set, options.train);
    models.push_back(result.model);
    if (results != nullptr) results->push_back(std::move(result));
  }
  return models;
}

}  // namespace quasar
