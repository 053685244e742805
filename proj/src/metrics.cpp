#include "quasar/metrics.hpp"

#include <algorithm>

namespace quasar {

AnswerMatcher::AnswerMatcher(const std::vector<std::string>& gold_answers,
                             const Catalog* catalog) {
  auto add_name = [this](std::string_view name) {
    std::string n = normalize_answer(name);
    if (!n.empty() && std::find(names_.begin(), names_.end(), n) == names_.end()) {
      names_.push_back(std::move(n));
    }
  };
  for (const auto& gold : gold_answers) {
    add_name(gold);
    if (catalog == nullptr) continue;
    for (const auto& id : catalog->match_answer(gold)) {
      if (std::find(entity_ids_.begin(), entity_ids_.end(), id) != entity_ids_.end()) continue;
      entity_ids_.push_back(id);
      for (const auto& name : catalog->at(id).names()) add_name(name);
    }
  }
}

bool AnswerMatcher::matches(std::string_view predicted) const {
  if (is_unknown_answer(predicted)) return false;
  std::string p = normalize_answer(predicted);
  return std::find(names_.begin(), names_.end(), p) != names_.end();
}

bool AnswerMatcher::present_in(const EvidencePiece& piece) const {
  for (const auto& id : piece.entity_ids) {
    if (std::find(entity_ids_.begin(), entity_ids_.end(), id) != entity_ids_.end()) return true;
  }
  std::string text = normalize_answer(piece.text);
  return std::any_of(names_.begin(), names_.end(),
                     [&](const std::string& n) { return contains_phrase(text, n); });
}

int p_at_1(std::string_view predicted, const std::vector<std::string>& golds,
           const Catalog* catalog) {
  return AnswerMatcher(golds, catalog).matches(predicted) ? 1 : 0;
}

namespace {

// 1-based rank of the first matching piece within k, 0 if none.
std::size_t first_hit(const EvidenceList& ranked, const AnswerMatcher& matcher,
                      std::size_t k) {
  std::size_t n = std::min(k, ranked.size());
  for (std::size_t r = 0; r < n; ++r) {
    if (matcher.present_in(ranked[r])) return r + 1;
  }
  return 0;
}

}  // namespace

bool answer_presence(const EvidenceList& ranked, const std::vector<std::string>& golds,
                     std::size_t k, const Catalog* catalog) {
  return first_hit(ranked, AnswerMatcher(golds, catalog), k) > 0;
}

double mrr_at_k(const EvidenceList& ranked, const std::vector<std::string>& golds,
                std::size_t k, const Catalog* catalog) {
  std::size_t rank = first_hit(ranked, AnswerMatcher(golds, catalog), k);
  return rank == 0 ? 0.0 : 1.0 / static_cast<double>(rank);
}

RefrainMetrics refrain_metrics(std::span<const RefrainRow> rows) {
  RefrainMetrics m;
  if (rows.empty()) return m;
  std::size_t refrained = 0;
  std::size_t refrained_absent = 0;
  std::size_t answered = 0;
  std::size_t correct = 0;
  for (const auto& row : rows) {
    if (row.refrained) {
      ++refrained;
      if (!row.answer_present) ++refrained_absent;
    } else {
      ++answered;
      if (row.correct) ++correct;
    }
  }
  m.refrain_rate = static_cast<double>(refrained) / static_cast<double>(rows.size());
  if (refrained > 0) {
    m.refrain_accuracy = static_cast<double>(refrained_absent) / static_cast<double>(refrained);
  }
  if (answered > 0) {
    m.p_at_1_answered = static_cast<double>(correct) / static_cast<double>(answered);
  }
  return m;
}

}  // namespace quasar
