#include "quasar/ingest.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "quasar/error.hpp"
#include "quasar/text.hpp"

namespace quasar {

void from_json(const Json& j, KgFact& fact) {
  fact.id = j.at("id").get<std::string>();
  fact.subject = j.at("subject").get<std::string>();
  fact.predicate = j.at("predicate").get<std::string>();
  fact.object = j.at("object").get<std::string>();
  fact.qualifiers.clear();
  for (const auto& q : j.value("qualifiers", Json::array())) {
    std::pair<std::string, std::string> kv;
    if (q.is_array()) {
      kv = {q.at(0).get<std::string>(), q.at(1).get<std::string>()};
    } else {
      kv = {q.at("key").get<std::string>(), q.at("value").get<std::string>()};
    }
    if (trim(kv.first).empty()) {
      throw ParseError("fact '" + fact.id + "' has a qualifier with empty key");
    }
    fact.qualifiers.push_back(std::move(kv));
  }
}

void to_json(Json& j, const KgFact& fact) {
  Json quals = Json::array();
  for (const auto& [k, v] : fact.qualifiers) quals.push_back({{"key", k}, {"value", v}});
  j = Json{{"id", fact.id},
           {"subject", fact.subject},
           {"predicate", fact.predicate},
           {"object", fact.object},
           {"qualifiers", quals}};
}

void from_json(const Json& j, TableDoc& table) {
  table.id = j.at("id").get<std::string>();
  table.page_title = j.at("page_title").get<std::string>();
  table.dom_path = j.value("dom_path", std::vector<std::string>{});
  table.headers = j.at("headers").get<std::vector<std::string>>();
  table.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.headers.size()) {
      throw ParseError("table '" + table.id + "' row " + std::to_string(r) + " has " +
                       std::to_string(table.rows[r].size()) + " cells, expected " +
                       std::to_string(table.headers.size()));
    }
  }
}

void to_json(Json& j, const TableDoc& table) {
  j = Json{{"id", table.id},
           {"page_title", table.page_title},
           {"dom_path", table.dom_path},
           {"headers", table.headers},
           {"rows", table.rows}};
}

void from_json(const Json& j, TextDoc& doc) {
  doc.id = j.at("id").get<std::string>();
  doc.page_title = j.at("page_title").get<std::string>();
  doc.dom_path = j.value("dom_path", std::vector<std::string>{});
  doc.sentences = j.at("sentences").get<std::vector<std::string>>();
  for (const auto& s : doc.sentences) {
    if (trim(s).empty()) throw ParseError("document '" + doc.id + "' has an empty sentence");
  }
}

void to_json(Json& j, const TextDoc& doc) {
  j = Json{{"id", doc.id},
           {"page_title", doc.page_title},
           {"dom_path", doc.dom_path},
           {"sentences", doc.sentences}};
}

std::vector<MentionSpan> find_mentions(const std::vector<Token>& tokens,
                                       const Catalog& catalog) {
  std::vector<MentionSpan> spans;
  const std::size_t max_len = catalog.max_name_tokens();
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::vector<std::string>* hit = nullptr;
    std::size_t hit_len = 0;
    std::size_t longest = std::min(max_len, tokens.size() - i);
    for (std::size_t len = longest; len >= 1 && hit == nullptr; --len) {
      std::string key = tokens[i].text;
      for (std::size_t k = 1; k < len; ++k) {
        key.push_back(' ');
        key.append(tokens[i + k].text);
      }
      if (const auto* ids = catalog.ids_for_name(key)) {
        hit = ids;
        hit_len = len;
      }
    }
    if (hit != nullptr) {
      spans.push_back({i, i + hit_len, *hit});
      i += hit_len;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<std::string> extract_entity_mentions(std::string_view text,
                                                 const Catalog& catalog) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& span : find_mentions(tokenize_spans(text), catalog)) {
    for (const auto& id : span.entity_ids) {
      if (seen.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

EvidencePiece verbalize_fact(const KgFact& fact, const Catalog& catalog) {
  const Entity* subject = catalog.find(fact.subject);
  if (subject == nullptr) {
    throw CatalogError("fact '" + fact.id + "' has unresolvable subject '" +
                       fact.subject + "'");
  }
  EvidencePiece piece;
  piece.id = "kg:" + fact.id;
  piece.source = SourceType::kKg;
  piece.entity_ids.push_back(subject->id);

  std::string object_text = fact.object;
  if (const Entity* object = catalog.find(fact.object)) {
    object_text = object->label;
    if (object->id != subject->id) piece.entity_ids.push_back(object->id);
  }
  piece.text = subject->label + " " + fact.predicate + " " + object_text;
  for (const auto& [key, value] : fact.qualifiers) {
    std::string value_text = value;
    if (const Entity* e = catalog.find(value)) {
      value_text = e->label;
      if (std::find(piece.entity_ids.begin(), piece.entity_ids.end(), e->id) ==
          piece.entity_ids.end()) {
        piece.entity_ids.push_back(e->id);
      }
    }
    piece.text += ", " + key + ": " + value_text;
  }
  piece.provenance = {fact.id, -1, subject->label};
  return piece;
}

EvidenceList verbalize_kg(const Entity& anchor, const std::vector<KgFact>& facts,
                          const Catalog& catalog, int max_depth) {
  EvidenceList out;
  std::vector<bool> emitted(facts.size(), false);
  std::unordered_set<std::string> visited{anchor.id};
  std::vector<std::string> frontier{anchor.id};
  for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
    std::unordered_set<std::string> current(frontier.begin(), frontier.end());
    std::vector<std::string> next;
    for (std::size_t i = 0; i < facts.size(); ++i) {
      if (emitted[i]) continue;
      const KgFact& fact = facts[i];
      bool touches = current.count(fact.subject) > 0 || current.count(fact.object) > 0;
      if (!touches) continue;
      emitted[i] = true;
      out.push_back(verbalize_fact(fact, catalog));
      for (const auto* endpoint : {&fact.subject, &fact.object}) {
        if (catalog.contains(*endpoint) && visited.insert(*endpoint).second) {
          next.push_back(*endpoint);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

namespace {

std::string page_prefix(const std::string& page_title,
                        const std::vector<std::string>& dom_path) {
  std::string prefix = page_title;
  for (const auto& label : dom_path) prefix += " / " + label;
  return prefix + " / ";
}

}  // namespace

EvidencePiece verbalize_table_row(const TableDoc& table, std::size_t row_index,
                                  const Catalog& catalog) {
  if (row_index >= table.rows.size()) {
    throw std::out_of_range("table '" + table.id + "' has no row " +
                            std::to_string(row_index));
  }
  const auto& row = table.rows[row_index];
  std::vector<std::string> cells;
  for (std::size_t c = 0; c < table.headers.size() && c < row.size(); ++c) {
    if (trim(row[c]).empty()) continue;
    cells.push_back(table.headers[c] + ": " + row[c]);
  }
  EvidencePiece piece;
  piece.id = "table:" + table.id + ":" + std::to_string(row_index);
  piece.source = SourceType::kTable;
  piece.text = page_prefix(table.page_title, table.dom_path) + join(cells, ", ");
  piece.entity_ids = extract_entity_mentions(piece.text, catalog);
  piece.provenance = {table.id, static_cast<int>(row_index), table.page_title};
  return piece;
}

EvidencePiece verbalize_text_sentence(const TextDoc& doc, std::size_t sentence_index,
                                      const Catalog& catalog) {
  if (sentence_index >= doc.sentences.size()) {
    throw std::out_of_range("document '" + doc.id + "' has no sentence " +
                            std::to_string(sentence_index));
  }
  EvidencePiece piece;
  piece.id = "text:" + doc.id + ":" + std::to_string(sentence_index);
  piece.source = SourceType::kText;
  piece.text = page_prefix(doc.page_title, doc.dom_path) + doc.sentences[sentence_index];
  piece.entity_ids = extract_entity_mentions(piece.text, catalog);
  piece.provenance = {doc.id, static_cast<int>(sentence_index), doc.page_title};
  return piece;
}

EvidenceList verbalize_corpus(const std::vector<KgFact>& facts,
                              const std::vector<TableDoc>& tables,
                              const std::vector<TextDoc>& docs,
                              const Catalog& catalog) {
  EvidenceList out;
  std::vector<std::string> subjects;
  std::unordered_map<std::string, std::vector<KgFact>> by_subject;
  for (const auto& fact : facts) {
    auto [it, inserted] = by_subject.try_emplace(fact.subject);
    if (inserted) subjects.push_back(fact.subject);
    it->second.push_back(fact);
  }
  for (const auto& subject : subjects) {
    // Restricting to facts with this subject keeps one piece per fact.
    auto pieces = verbalize_kg(catalog.at(subject), by_subject[subject], catalog);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  for (const auto& table : tables) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      out.push_back(verbalize_table_row(table, r, catalog));
    }
  }
  for (const auto& doc : docs) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      out.push_back(verbalize_text_sentence(doc, s, catalog));
    }
  }
  return out;
}

std::vector<KgFact> read_kg_facts(const std::filesystem::path& path) {
  return read_records<KgFact>(path);
}

std::vector<TableDoc> read_tables(const std::filesystem::path& path) {
  return read_records<TableDoc>(path);
}

std::vector<TextDoc> read_text_docs(const std::filesystem::path& path) {
  return read_records<TextDoc>(path);
}

}  // namespace quasar
