#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "quasar/core.hpp"
#include "quasar/encoding.hpp"
#include "quasar/pipeline.hpp"
#include "quasar/rerank.hpp"
#include "quasar/trainer.hpp"

namespace quasar {

// A question with its intent, retrieved pool and gold answers.
struct LabeledPool {
  std::string id;
  StructuredIntent si;
  std::string question;
  EvidenceList pool;
  std::vector<std::string> gold_answers;
};

LabeledPool label_question(const IntentStage& intent, const EvidenceSource& source,
                           const Question& q);

struct RerankTrainingOptions {
  std::vector<RerankStage> stages{{1000, 100}, {100, 30}};
  GraphCaps training_caps{100, 400};
  GraphCaps inference_caps{1000, 4000};
  int layers = 3;
  int dim = 64;
  // Stage s is initialized from seed + s.
  std::uint64_t seed = 0;
  TrainOptions train;
};

// One model per pruning stage. Stage s trains on the top training_caps
// evidence of its input list: the retrieved pool for the first stage, the
// output of the already trained earlier stages otherwise. Per-stage training
// curves go to `results` when given.
std::vector<GnnModel<double>> train_rerankers(const std::vector<LabeledPool>& train,
                                              const std::vector<LabeledPool>& dev,
                                              const Catalog& catalog,
                                              const RerankTrainingOptions& options,
                                              std::vector<TrainResult>* results = nullptr);

}  // namespace quasar
