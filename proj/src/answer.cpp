#include "quasar/answer.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "quasar/error.hpp"
#include "quasar/http.hpp"
#include "quasar/ingest.hpp"
#include "quasar/io.hpp"
#include "quasar/metrics.hpp"
#include "quasar/text.hpp"

namespace quasar {

std::string build_prompt(std::string_view concatenated_si, const EvidenceList& evidence) {
  std::string prompt = "SI: ";
  prompt.append(concatenated_si);
  prompt.append(" Evidence: ");
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    if (i > 0) prompt.append(" | ");
    prompt.append(evidence[i].text);
  }
  return prompt;
}

std::string build_prompt(const StructuredIntent& si, std::string_view question,
                         const EvidenceList& evidence) {
  return build_prompt(si_concat(si, question), evidence);
}

HttpGeneratorClient::HttpGeneratorClient(std::string url, int timeout_ms)
    : url_(std::move(url)), timeout_ms_(timeout_ms) {}

std::string HttpGeneratorClient::complete(const GeneratorRequest& request) {
  Json reply = post_json(
      url_, Json{{"prompt", request.prompt}, {"max_tokens", request.max_answer_tokens}},
      timeout_ms_);
  auto it = reply.find("text");
  if (it == reply.end() || !it->is_string()) {
    throw TransportError(url_, "reply lacks string field 'text'");
  }
  return it->get<std::string>();
}

std::string generate(GeneratorClient& client, const GeneratorRequest& request) {
  std::string reply = client.complete(request);
  std::string first = trim(reply.substr(0, reply.find('\n')));
  if (first.empty()) return std::string(kUnknownAnswer);
  return first;
}

std::string extractive_oracle_generate(const StructuredIntent& si,
                                       const EvidenceList& evidence, const Catalog& catalog) {
  std::unordered_set<std::string> question_entities;
  for (const auto& name : si.entities) {
    for (auto& id : catalog.match_answer(name)) question_entities.insert(std::move(id));
    for (auto& id : extract_entity_mentions(name, catalog)) question_entities.insert(std::move(id));
  }

  struct Candidate {
    double total = 0.0;
    std::size_t first_rank = 0;
  };
  std::map<std::string, Candidate> candidates;
  for (std::size_t rank = 0; rank < evidence.size(); ++rank) {
    std::unordered_set<std::string> seen;
    for (const auto& id : evidence[rank].entity_ids) {
      if (question_entities.count(id) > 0 || !seen.insert(id).second) continue;
      if (!catalog.contains(id)) continue;
      auto [it, inserted] = candidates.try_emplace(id, Candidate{0.0, rank});
      it->second.total += evidence[rank].score;
    }
  }
  const std::string* best = nullptr;
  Candidate best_value;
  for (const auto& [id, c] : candidates) {
    bool better = best == nullptr || c.total > best_value.total ||
                  (c.total == best_value.total && c.first_rank < best_value.first_rank);
    if (better) {
      best = &id;
      best_value = c;
    }
  }
  if (best == nullptr) return std::string(kUnknownAnswer);
  return catalog.at(*best).label;
}

AnswerResult attach_support(std::string_view answer, const EvidenceList& evidence,
                            const Catalog& catalog) {
  std::vector<std::string> support;
  if (!is_unknown_answer(answer)) {
    AnswerMatcher matcher({std::string(answer)}, &catalog);
    for (const auto& piece : evidence) {
      if (matcher.present_in(piece)) support.push_back(piece.id);
    }
  }
  return AnswerResult(std::string(answer), std::move(support),
                      static_cast<int>(evidence.size()));
}

TrainingRecord faithful_transform(TrainingRecord record, const std::vector<std::string>& golds,
                                  const Catalog& catalog) {
  if (!answer_presence(record.evidence, golds, record.evidence.size(), &catalog)) {
    record.target_answer = std::string(kUnknownAnswer);
  }
  return record;
}

void export_training_records(const std::filesystem::path& path,
                             const std::vector<TrainingRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += Json{{"prompt", build_prompt(r.si, r.question, r.evidence)},
                {"target", r.target_answer}}
               .dump();
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace quasar
