#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "quasar/core.hpp"

namespace quasar {

struct GeneratorRequest {
  std::string prompt;
  int max_answer_tokens = 32;
};

// "SI: <concatenated intent> Evidence: <piece 1> | <piece 2> | ..." in rank
// order, without any instruction text.
std::string build_prompt(std::string_view concatenated_si, const EvidenceList& evidence);
std::string build_prompt(const StructuredIntent& si, std::string_view question,
                         const EvidenceList& evidence);

// Remote answer generator. Implementations must tolerate concurrent calls.
class GeneratorClient {
 public:
  virtual ~GeneratorClient() = default;
  // Raw reply text. Throws TransportError on failure.
  virtual std::string complete(const GeneratorRequest& request) = 0;
};

// POST {"prompt", "max_tokens"} -> {"text"}.
class HttpGeneratorClient : public GeneratorClient {
 public:
  HttpGeneratorClient(std::string url, int timeout_ms);
  std::string complete(const GeneratorRequest& request) override;
  const std::string& url() const { return url_; }

 private:
  std::string url_;
  int timeout_ms_;
};

// First line of the client's reply, trimmed; "unknown" when that is empty.
std::string generate(GeneratorClient& client, const GeneratorRequest& request);

// Deterministic offline generator: among entities mentioned in the evidence
// that are not question entities, returns the label of the one with the
// largest summed evidence score (ties: earliest rank, then id), or "unknown".
std::string extractive_oracle_generate(const StructuredIntent& si,
                                       const EvidenceList& evidence, const Catalog& catalog);

// Ids of pieces whose normalized text contains the normalized answer or a
// catalog name of the answer entity, or that mention that entity.
AnswerResult attach_support(std::string_view answer, const EvidenceList& evidence,
                            const Catalog& catalog);

struct TrainingRecord {
  std::string question_id;
  StructuredIntent si;
  std::string question;
  EvidenceList evidence;
  std::string target_answer;
};

// Faithful mode: the target becomes "unknown" when no gold answer is present
// anywhere in the record's evidence (alias-aware); otherwise unchanged.
TrainingRecord faithful_transform(TrainingRecord record, const std::vector<std::string>& golds,
                                  const Catalog& catalog);

// One {"prompt", "target"} line per record.
void export_training_records(const std::filesystem::path& path,
                             const std::vector<TrainingRecord>& records);

}  // namespace quasar
