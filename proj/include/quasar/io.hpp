#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasar/core.hpp"

// Line-delimited JSON interchange. Field names follow the data model exactly
// and are part of the file contract.
namespace quasar {

using Json = nlohmann::json;

void to_json(Json& j, const Entity& e);
void from_json(const Json& j, Entity& e);
void to_json(Json& j, const Provenance& p);
void from_json(const Json& j, Provenance& p);
void to_json(Json& j, const EvidencePiece& piece);
void from_json(const Json& j, EvidencePiece& piece);
void to_json(Json& j, const StructuredIntent& si);
void from_json(const Json& j, StructuredIntent& si);
void to_json(Json& j, const Question& q);
void from_json(const Json& j, Question& q);
void to_json(Json& j, const AnswerResult& r);
AnswerResult answer_result_from_json(const Json& j);

// Calls fn(record, line_number) for every non-blank line. Malformed JSON or a
// record rejected by fn (any exception) becomes a ParseError carrying the
// 1-based line number.
void for_each_record(std::istream& in,
                     const std::function<void(const Json&, std::size_t)>& fn);
void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const Json&, std::size_t)>& fn);

template <typename T>
std::vector<T> read_records(const std::filesystem::path& path) {
  std::vector<T> out;
  for_each_record(path, [&](const Json& j, std::size_t) { out.push_back(j.get<T>()); });
  return out;
}

template <typename T>
void write_records(std::ostream& out, const std::vector<T>& records) {
  for (const auto& r : records) out << Json(r).dump() << '\n';
}

template <typename T>
void write_records(const std::filesystem::path& path, const std::vector<T>& records);

Catalog read_catalog(const std::filesystem::path& path);
void write_catalog(const std::filesystem::path& path, const Catalog& catalog);
EvidenceList read_pool(const std::filesystem::path& path);
void write_pool(const std::filesystem::path& path, const EvidenceList& pool);

// Benchmark files use {id, question, answers[]}.
std::vector<Question> read_benchmark(const std::filesystem::path& path);
void write_benchmark(const std::filesystem::path& path, const std::vector<Question>& qs);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace quasar
