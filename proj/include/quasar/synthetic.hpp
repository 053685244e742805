#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "quasar/core.hpp"
#include "quasar/training.hpp"

namespace quasar {

// Seeded generator of retrieval benchmarks with planted evidence. Every
// question "<type> <subject> <rel1> <rel2>" gets a pool of
//  - relevant pieces mentioning the subject, one relation word and the
//    answer entity;
//  - lexical distractors repeating the subject and both relation words next
//    to a one-off decoy entity, which BM25 prefers over the relevant pieces;
//  - filler noise with shared noise entities.
// Relevant pieces and distractors have cue_slots style words each; a slot is
// "relevant-style" with probability relevant_cue_rate in relevant pieces and
// distractor_cue_rate in distractors, "distractor-style" otherwise.
struct SyntheticOptions {
  std::size_t questions = 200;
  std::size_t pool_size = 1000;
  std::size_t relevant_per_question = 3;
  std::size_t min_distractors = 10;
  std::size_t max_distractors = 80;
  std::size_t cue_slots = 3;
  double relevant_cue_rate = 0.8;
  double distractor_cue_rate = 0.2;
  // Probability that a noise piece mentions the subject.
  double noise_query_rate = 0.5;
  std::size_t noise_entities = 2000;
  std::uint64_t seed = 1;
};

struct SyntheticItem {
  Question question;
  StructuredIntent si;
  // Ranked by BM25 over the question's own pool, zero-score pieces last by id.
  EvidenceList pool;
  std::size_t distractors = 0;
};

struct SyntheticBenchmark {
  std::shared_ptr<const Catalog> catalog;
  std::vector<SyntheticItem> items;
};

SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& options);

// Items [begin, end) as training inputs.
std::vector<LabeledPool> labeled_pools(const SyntheticBenchmark& bench, std::size_t begin,
                                       std::size_t end);

// Pipeline stages that replay the benchmark's intents and pools.
std::shared_ptr<const FixedIntentStage> synthetic_intents(const SyntheticBenchmark& bench);
std::shared_ptr<const FixedPoolSource> synthetic_pools(const SyntheticBenchmark& bench);

}  // namespace quasar
