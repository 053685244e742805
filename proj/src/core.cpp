#include "quasar/core.hpp"

#include <algorithm>
#include <set>

#include "quasar/error.hpp"
#include "quasar/text.hpp"

namespace quasar {

const char* category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInternal: return "internal";
    case ErrorCategory::kUsage: return "usage";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kCatalog: return "catalog";
    case ErrorCategory::kTransport: return "transport";
    case ErrorCategory::kConfig: return "config";
  }
  return "internal";
}

ParseError::ParseError(const std::string& message, std::size_t line)
    : Error(ErrorCategory::kParse,
            line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

TransportError::TransportError(const std::string& endpoint, const std::string& cause)
    : Error(ErrorCategory::kTransport, endpoint + ": " + cause),
      endpoint_(endpoint),
      cause_(cause) {}

std::vector<std::string> Entity::names() const {
  std::vector<std::string> out;
  out.reserve(aliases.size() + 1);
  out.push_back(label);
  out.insert(out.end(), aliases.begin(), aliases.end());
  return out;
}

std::string_view to_string(SourceType source) {
  switch (source) {
    case SourceType::kKg: return "KG";
    case SourceType::kText: return "TEXT";
    case SourceType::kTable: return "TABLE";
  }
  return "TEXT";
}

SourceType parse_source_type(std::string_view name) {
  if (name == "KG") return SourceType::kKg;
  if (name == "TEXT") return SourceType::kText;
  if (name == "TABLE") return SourceType::kTable;
  throw ParseError("unknown source type '" + std::string(name) + "'");
}

bool StructuredIntent::empty() const {
  return ans_type.empty() && entities.empty() && !relation && !time && !location;
}

namespace {

std::optional<std::string> optional_slot(std::string_view value) {
  std::string trimmed = trim(value);
  if (trimmed.empty()) return std::nullopt;
  return trimmed;
}

std::vector<std::string> list_slot(std::vector<std::string> values) {
  std::vector<std::string> out;
  for (auto& value : values) {
    std::string trimmed = trim(value);
    if (!trimmed.empty()) out.push_back(std::move(trimmed));
  }
  return out;
}

}  // namespace

StructuredIntent make_intent(std::vector<std::string> ans_type,
                             std::vector<std::string> entities,
                             std::string_view relation, std::string_view time,
                             std::string_view location) {
  StructuredIntent si;
  si.ans_type = list_slot(std::move(ans_type));
  si.entities = list_slot(std::move(entities));
  si.relation = optional_slot(relation);
  si.time = optional_slot(time);
  si.location = optional_slot(location);
  return si;
}

std::string si_concat(const StructuredIntent& si, std::string_view fallback) {
  std::vector<std::string> parts;
  parts.insert(parts.end(), si.ans_type.begin(), si.ans_type.end());
  parts.insert(parts.end(), si.entities.begin(), si.entities.end());
  for (const auto* slot : {&si.relation, &si.time, &si.location}) {
    if (*slot) parts.push_back(**slot);
  }
  if (parts.empty()) return std::string(fallback);
  return join(parts, " ");
}

bool is_unknown_answer(std::string_view answer) {
  return to_lower(trim(answer)) == kUnknownAnswer;
}

AnswerResult::AnswerResult(std::string answer,
                           std::vector<std::string> supporting_evidence,
                           int prompt_evidence_count)
    : answer_(std::move(answer)),
      refrained_(is_unknown_answer(answer_)),
      support_(std::move(supporting_evidence)),
      prompt_evidence_count_(prompt_evidence_count) {
  if (refrained_) support_.clear();
}

Catalog::Catalog(std::vector<Entity> entities) : entities_(std::move(entities)) {
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    const Entity& e = entities_[i];
    if (e.id.empty()) throw CatalogError("entity with empty id");
    if (trim(e.label).empty()) throw CatalogError("entity '" + e.id + "' has empty label");
    if (!by_id_.emplace(e.id, i).second) {
      throw CatalogError("duplicate entity id '" + e.id + "'");
    }
    std::set<std::string> folded;
    for (const auto& alias : e.aliases) {
      if (!folded.insert(to_lower(alias)).second) {
        throw CatalogError("entity '" + e.id + "' has duplicate alias '" + alias + "'");
      }
    }
    has_locations_ = has_locations_ || e.is_location;

    for (const auto& name : e.names()) {
      std::vector<std::string> tokens = tokenize(name);
      if (tokens.empty()) continue;
      max_name_tokens_ = std::max(max_name_tokens_, tokens.size());
      auto& ids = by_name_[join(tokens, " ")];
      if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) ids.push_back(e.id);
    }
  }
  for (auto& [name, ids] : by_name_) std::sort(ids.begin(), ids.end());
}

const Entity* Catalog::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

const Entity& Catalog::at(std::string_view id) const {
  const Entity* e = find(id);
  if (e == nullptr) throw CatalogError("unknown entity id '" + std::string(id) + "'");
  return *e;
}

const std::vector<std::string>* Catalog::ids_for_name(const std::string& tokens) const {
  auto it = by_name_.find(tokens);
  return it == by_name_.end() ? nullptr : &it->second;
}

std::vector<std::string> Catalog::match_answer(std::string_view answer) const {
  // normalize_answer only differs from the token join by a leading article.
  std::string normalized = normalize_answer(answer);
  std::vector<std::string> out;
  if (normalized.empty()) return out;
  auto add = [&](const std::string& key) {
    if (const auto* ids = ids_for_name(key)) {
      for (const auto& id : *ids) {
        const Entity& e = at(id);
        for (const auto& name : e.names()) {
          if (normalize_answer(name) == normalized) {
            out.push_back(id);
            break;
          }
        }
      }
    }
  };
  add(normalized);
  for (const char* article : {"the ", "a ", "an "}) add(article + normalized);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace quasar
