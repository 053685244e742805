#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quasar/core.hpp"
#include "quasar/text.hpp"

namespace quasar {

// Gold answers expanded through the catalog: every gold string plus the
// names of entities whose name matches a gold, all normalized.
class AnswerMatcher {
 public:
  AnswerMatcher(const std::vector<std::string>& gold_answers, const Catalog* catalog);

  // normalize_answer(predicted) equals one of the accepted names.
  // "unknown" never matches.
  bool matches(std::string_view predicted) const;

  // Piece text contains an accepted name on word boundaries, or the piece
  // mentions a gold entity.
  bool present_in(const EvidencePiece& piece) const;

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& entity_ids() const { return entity_ids_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::string> entity_ids_;
};

int p_at_1(std::string_view predicted, const std::vector<std::string>& golds,
           const Catalog* catalog = nullptr);

// Whether a gold answer appears in the first k pieces.
bool answer_presence(const EvidenceList& ranked, const std::vector<std::string>& golds,
                     std::size_t k, const Catalog* catalog = nullptr);

// 1 / rank of the first piece within k containing a gold answer, else 0.
double mrr_at_k(const EvidenceList& ranked, const std::vector<std::string>& golds,
                std::size_t k, const Catalog* catalog = nullptr);

// Row-level inputs to the refrain metrics.
struct RefrainRow {
  bool refrained = false;
  bool answer_present = false;
  bool correct = false;
};

struct RefrainMetrics {
  double refrain_rate = 0.0;
  // refrained-and-answer-absent / refrained; nullopt when nothing refrained.
  std::optional<double> refrain_accuracy;
  // correct / answered; nullopt when every question refrained.
  std::optional<double> p_at_1_answered;
};

RefrainMetrics refrain_metrics(std::span<const RefrainRow> rows);

}  // namespace quasar
