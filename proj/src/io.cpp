#include "quasar/io.hpp"

#include <fstream>
#include <sstream>

#include "quasar/error.hpp"
#include "quasar/text.hpp"

namespace quasar {

namespace {

template <typename T>
void get_optional(const Json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    out.reset();
  } else {
    out = it->get<T>();
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void to_json(Json& j, const Entity& e) {
  j = Json{{"id", e.id}, {"label", e.label}, {"aliases", e.aliases}};
  if (e.is_location) j["is_location"] = true;
}

void from_json(const Json& j, Entity& e) {
  e.id = j.at("id").get<std::string>();
  e.label = j.at("label").get<std::string>();
  e.aliases = j.value("aliases", std::vector<std::string>{});
  e.is_location = j.value("is_location", false);
}

void to_json(Json& j, const Provenance& p) {
  j = Json{{"doc", p.doc}, {"index", p.index}, {"title", p.title}};
}

void from_json(const Json& j, Provenance& p) {
  p.doc = j.at("doc").get<std::string>();
  p.index = j.value("index", -1);
  p.title = j.value("title", std::string{});
}

void to_json(Json& j, const EvidencePiece& piece) {
  j = Json{{"id", piece.id},
           {"source", std::string(to_string(piece.source))},
           {"text", piece.text},
           {"entity_ids", piece.entity_ids},
           {"provenance", piece.provenance},
           {"score", piece.score}};
}

void from_json(const Json& j, EvidencePiece& piece) {
  piece.id = j.at("id").get<std::string>();
  piece.source = parse_source_type(j.at("source").get<std::string>());
  piece.text = j.at("text").get<std::string>();
  if (piece.text.empty()) throw ParseError("evidence '" + piece.id + "' has empty text");
  piece.entity_ids = j.value("entity_ids", std::vector<std::string>{});
  piece.provenance = j.at("provenance").get<Provenance>();
  piece.score = j.value("score", 0.0);
}

void to_json(Json& j, const StructuredIntent& si) {
  j = Json{{"ans_type", si.ans_type},
           {"entities", si.entities},
           {"relation", si.relation ? Json(*si.relation) : Json(nullptr)},
           {"time", si.time ? Json(*si.time) : Json(nullptr)},
           {"location", si.location ? Json(*si.location) : Json(nullptr)}};
}

void from_json(const Json& j, StructuredIntent& si) {
  si.ans_type = j.value("ans_type", std::vector<std::string>{});
  si.entities = j.value("entities", std::vector<std::string>{});
  get_optional(j, "relation", si.relation);
  get_optional(j, "time", si.time);
  get_optional(j, "location", si.location);
}

void to_json(Json& j, const Question& q) {
  j = Json{{"id", q.id}, {"text", q.text}, {"gold_answers", q.gold_answers}};
}

void from_json(const Json& j, Question& q) {
  q.id = j.at("id").get<std::string>();
  q.text = j.at("text").get<std::string>();
  if (trim(q.text).empty()) throw ParseError("question '" + q.id + "' has empty text");
  q.gold_answers = j.value("gold_answers", std::vector<std::string>{});
}

void to_json(Json& j, const AnswerResult& r) {
  j = Json{{"answer", r.answer()},
           {"refrained", r.refrained()},
           {"supporting_evidence", r.supporting_evidence()},
           {"prompt_evidence_count", r.prompt_evidence_count()}};
}

AnswerResult answer_result_from_json(const Json& j) {
  return AnswerResult(j.at("answer").get<std::string>(),
                      j.value("supporting_evidence", std::vector<std::string>{}),
                      j.value("prompt_evidence_count", 0));
}

void for_each_record(std::istream& in,
                     const std::function<void(const Json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      fn(Json::parse(line), line_no);
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_no);
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
}

void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  try {
    for_each_record(in, fn);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

template <typename T>
void write_records(const std::filesystem::path& path, const std::vector<T>& records) {
  auto out = open_out(path);
  write_records(out, records);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

template void write_records(const std::filesystem::path&, const std::vector<Entity>&);
template void write_records(const std::filesystem::path&, const std::vector<EvidencePiece>&);
template void write_records(const std::filesystem::path&, const std::vector<Question>&);
template void write_records(const std::filesystem::path&, const std::vector<StructuredIntent>&);

Catalog read_catalog(const std::filesystem::path& path) {
  return Catalog(read_records<Entity>(path));
}

void write_catalog(const std::filesystem::path& path, const Catalog& catalog) {
  write_records(path, std::vector<Entity>(catalog.entities().begin(),
                                          catalog.entities().end()));
}

EvidenceList read_pool(const std::filesystem::path& path) {
  return read_records<EvidencePiece>(path);
}

void write_pool(const std::filesystem::path& path, const EvidenceList& pool) {
  write_records(path, pool);
}

std::vector<Question> read_benchmark(const std::filesystem::path& path) {
  std::vector<Question> out;
  for_each_record(path, [&](const Json& j, std::size_t) {
    Question q;
    q.id = j.at("id").get<std::string>();
    q.text = j.at("question").get<std::string>();
    if (trim(q.text).empty()) throw ParseError("question '" + q.id + "' has empty text");
    q.gold_answers = j.value("answers", std::vector<std::string>{});
    out.push_back(std::move(q));
  });
  return out;
}

void write_benchmark(const std::filesystem::path& path, const std::vector<Question>& qs) {
  auto out = open_out(path);
  for (const auto& q : qs) {
    out << Json{{"id", q.id}, {"question", q.text}, {"answers", q.gold_answers}}.dump()
        << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace quasar
