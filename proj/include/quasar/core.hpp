#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace quasar {

inline constexpr std::string_view kUnknownAnswer = "unknown";

struct Entity {
  std::string id;
  std::string label;
  std::vector<std::string> aliases;
  // Optional catalog flag consumed by the rules-based intent generator.
  bool is_location = false;

  // Label followed by aliases.
  std::vector<std::string> names() const;
};

enum class SourceType { kKg, kText, kTable };

std::string_view to_string(SourceType source);
SourceType parse_source_type(std::string_view name);

// Origin of an evidence piece: the fact id (index -1), or a document/table id
// with the sentence/row index. title is the page title or, for KG facts, the
// subject label.
struct Provenance {
  std::string doc;
  int index = -1;
  std::string title;

  bool operator==(const Provenance&) const = default;
};

struct EvidencePiece {
  std::string id;
  SourceType source = SourceType::kText;
  std::string text;
  std::vector<std::string> entity_ids;
  Provenance provenance;
  double score = 0.0;

  bool operator==(const EvidencePiece&) const = default;
};

using EvidenceList = std::vector<EvidencePiece>;

struct StructuredIntent {
  std::vector<std::string> ans_type;
  std::vector<std::string> entities;
  std::optional<std::string> relation;
  std::optional<std::string> time;
  std::optional<std::string> location;

  // True when no slot carries a value; downstream falls back to the question.
  bool empty() const;

  bool operator==(const StructuredIntent&) const = default;
};

// Builds an intent, trimming values and dropping blank ones.
StructuredIntent make_intent(std::vector<std::string> ans_type,
                             std::vector<std::string> entities,
                             std::string_view relation = {},
                             std::string_view time = {},
                             std::string_view location = {});

// Slot values in the order Ans-Type, Entities, Relation, Time, Location joined
// by single spaces; fallback when every slot is empty.
std::string si_concat(const StructuredIntent& si, std::string_view fallback);

struct Question {
  std::string id;
  std::string text;
  std::vector<std::string> gold_answers;

  bool operator==(const Question&) const = default;
};

// Case-insensitive, whitespace-trimmed comparison against "unknown".
bool is_unknown_answer(std::string_view answer);

class AnswerResult {
 public:
  AnswerResult() : AnswerResult(std::string(kUnknownAnswer), {}, 0) {}
  AnswerResult(std::string answer, std::vector<std::string> supporting_evidence,
               int prompt_evidence_count);

  const std::string& answer() const { return answer_; }
  bool refrained() const { return refrained_; }
  const std::vector<std::string>& supporting_evidence() const { return support_; }
  int prompt_evidence_count() const { return prompt_evidence_count_; }

  bool operator==(const AnswerResult&) const = default;

 private:
  std::string answer_;
  bool refrained_;
  std::vector<std::string> support_;
  int prompt_evidence_count_;
};

// Immutable entity catalog with a name index over labels and aliases.
class Catalog {
 public:
  Catalog() = default;
  // Throws CatalogError on empty/duplicate ids, empty labels, or aliases that
  // collide after case folding.
  explicit Catalog(std::vector<Entity> entities);

  bool empty() const { return entities_.empty(); }
  std::size_t size() const { return entities_.size(); }
  std::span<const Entity> entities() const { return entities_; }

  const Entity* find(std::string_view id) const;
  const Entity& at(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  // Entity ids whose label or alias tokenizes to exactly this space-joined
  // token sequence. Sorted by id.
  const std::vector<std::string>* ids_for_name(const std::string& tokens) const;
  std::size_t max_name_tokens() const { return max_name_tokens_; }

  // Ids of entities with a name whose normalize_answer() form equals the
  // normalized answer. Sorted by id.
  std::vector<std::string> match_answer(std::string_view answer) const;

  bool has_location_flags() const { return has_locations_; }

 private:
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::string>> by_name_;
  std::size_t max_name_tokens_ = 0;
  bool has_locations_ = false;
};

}  // namespace quasar
