#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quasar/core.hpp"
#include "quasar/io.hpp"
#include "quasar/pipeline.hpp"

namespace quasar {

struct EvalRow {
  std::string id;
  std::string predicted;
  bool correct = false;
  bool refrained = false;
  // Gold answer present in the evidence handed to the generator.
  bool answer_present = false;
  std::map<std::size_t, bool> ap_at;
  std::map<std::size_t, double> rr_at;
  // Empty unless the question failed; failed questions count as incorrect.
  std::string error;
};

struct EvalReport {
  std::vector<std::size_t> ks;
  // Sorted by question id.
  std::vector<EvalRow> rows;

  double p_at_1 = 0.0;
  std::optional<double> p_at_1_answered;
  std::map<std::size_t, double> ap_at;
  std::map<std::size_t, double> mrr_at;
  double refrain_rate = 0.0;
  // Denominator: refrained questions. Absent when nothing was refrained.
  std::optional<double> refrain_accuracy;

  // Recomputes the aggregates from rows.
  void summarize();

  // One object per row followed by a {"summary": ...} line.
  std::string to_jsonl() const;
  // Per-question table followed by the aggregates.
  std::string to_table() const;
};

// The ranked list that AP@k and MRR@k are read from: the most refined
// snapshot (pool, then each stage output) whose nominal size is at least k.
// The pool always qualifies.
const EvidenceList& snapshot_for(const PipelineTrace& trace, const RerankSchedule& schedule,
                                 std::size_t k);

EvalRow evaluate_question(const Pipeline& pipeline, const Question& q,
                          const std::vector<std::size_t>& ks);

// Runs every question through the pipeline on `jobs` threads. Per-question
// exceptions are recorded in the row and the run continues.
EvalReport run_benchmark(const Pipeline& pipeline, const std::vector<Question>& questions,
                         std::vector<std::size_t> ks = {30, 100, 1000}, int jobs = 1);

}  // namespace quasar
