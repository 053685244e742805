#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "quasar/core.hpp"
#include "quasar/io.hpp"
#include "quasar/text.hpp"

namespace quasar {

struct KgFact {
  std::string id;
  std::string subject;
  std::string predicate;
  // An entity id when it resolves against the catalog, otherwise a literal.
  std::string object;
  std::vector<std::pair<std::string, std::string>> qualifiers;
};

struct TableDoc {
  std::string id;
  std::string page_title;
  std::vector<std::string> dom_path;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
};

struct TextDoc {
  std::string id;
  std::string page_title;
  std::vector<std::string> dom_path;
  std::vector<std::string> sentences;
};

void from_json(const Json& j, KgFact& fact);
void to_json(Json& j, const KgFact& fact);
void from_json(const Json& j, TableDoc& table);
void to_json(Json& j, const TableDoc& table);
void from_json(const Json& j, TextDoc& doc);
void to_json(Json& j, const TextDoc& doc);

// A longest-match mention: token range [begin, end) and the matched entities.
struct MentionSpan {
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  std::vector<std::string> entity_ids;
};

// Left-to-right longest match over catalog labels and aliases on lowercase
// word tokens. Shorter matches overlapping a longer one are suppressed.
std::vector<MentionSpan> find_mentions(const std::vector<Token>& tokens,
                                       const Catalog& catalog);

// Entity ids mentioned in text, deduplicated in first-occurrence order.
std::vector<std::string> extract_entity_mentions(std::string_view text,
                                                 const Catalog& catalog);

// Breadth-first linearization of the fact graph around anchor. Depth 1 visits
// facts with the anchor as subject or object in input order; larger depths
// expand through the entities reached at the previous depth.
EvidenceList verbalize_kg(const Entity& anchor, const std::vector<KgFact>& facts,
                          const Catalog& catalog, int max_depth = 1);

// "subjectLabel predicate objectLabel, key: value, ...". Throws CatalogError
// when the subject does not resolve.
EvidencePiece verbalize_fact(const KgFact& fact, const Catalog& catalog);

EvidencePiece verbalize_table_row(const TableDoc& table, std::size_t row_index,
                                  const Catalog& catalog);
EvidencePiece verbalize_text_sentence(const TextDoc& doc, std::size_t sentence_index,
                                      const Catalog& catalog);

// Verbalizes every unit. Output order: KG facts grouped by subject in order of
// first appearance, then tables by row, then text documents by sentence.
EvidenceList verbalize_corpus(const std::vector<KgFact>& facts,
                              const std::vector<TableDoc>& tables,
                              const std::vector<TextDoc>& docs,
                              const Catalog& catalog);

std::vector<KgFact> read_kg_facts(const std::filesystem::path& path);
std::vector<TableDoc> read_tables(const std::filesystem::path& path);
std::vector<TextDoc> read_text_docs(const std::filesystem::path& path);

}  // namespace quasar
