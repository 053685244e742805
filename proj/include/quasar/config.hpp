#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "quasar/io.hpp"
#include "quasar/rerank.hpp"
#include "quasar/retrieval.hpp"

namespace quasar {

struct QuConfig {
  // "rules" or "model".
  std::string mode = "rules";
  std::string si_model_url;
  int timeout_ms = 10000;
};

struct RerankConfig {
  // "gnn", "ce" or "bm25".
  std::string mode = "ce";
  std::vector<RerankStage> stages{{1000, 100}, {100, 30}};
  GraphCaps inference_caps{1000, 4000};
  GraphCaps training_caps{100, 400};
  int layers = 3;
  int dim = 64;
  int epochs = 5;
  double learning_rate = 0.01;
  std::string checkpoint;
  std::string stage1_scorer_url;
  std::string stage2_scorer_url;
  int timeout_ms = 10000;
};

struct AnswerConfig {
  // "oracle" or "remote".
  std::string generator = "oracle";
  std::string generator_url;
  int timeout_ms = 60000;
  int max_answer_tokens = 32;
  bool fallback_to_oracle = true;
};

struct EvalConfig {
  std::vector<std::size_t> ks{30, 100, 1000};
  int jobs = 1;
};

struct Config {
  RetrievalConfig retrieval;
  QuConfig qu;
  RerankConfig rerank;
  AnswerConfig answer;
  EvalConfig eval;
  std::uint64_t seed = 0;

  // Missing keys keep their defaults; unknown keys are rejected.
  static Config from_json(const Json& j);
  static Config load(const std::filesystem::path& path);
  Json to_json() const;

  // Endpoint overrides from QUASAR_GENERATOR_URL, QUASAR_SCORER_URL_1 and
  // QUASAR_SCORER_URL_2.
  void apply_environment();

  // Pool size: also the input size of the first pruning stage.
  void set_pool_p(std::size_t pool_p);
  // Size of the evidence list handed to the answer generator.
  void set_final_k(std::size_t final_k);

  RerankSchedule schedule() const;
  // Throws ConfigError.
  void validate() const;
};

}  // namespace quasar
