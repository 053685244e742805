#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "quasar/core.hpp"

namespace quasar {

// Rules-based structured intent: wh-word answer type, catalog mentions as
// entities, year/ordinal/relative time cues, flagged location entities, and
// the remaining question words minus auxiliaries and articles as relation.
// Deterministic and total.
StructuredIntent generate_si_rules(const Question& q, const Catalog& catalog);

// Canonical slot-tagged form, all five labels always present:
// "Ans-Type: a, b | Entities: x, y | Relation: r | Time: t | Location: l".
std::string format_si(const StructuredIntent& si);

// Parses a slot-tagged reply. Labels are case-insensitive, unknown labels are
// ignored, missing labels leave the slot empty. Returns nullopt when the reply
// is blank, a segment lacks a "Label:" prefix, or no known label is present.
std::optional<StructuredIntent> parse_si_reply(std::string_view reply);

// Remote seq2seq intent model. Implementations must tolerate concurrent calls.
class SiModelClient {
 public:
  virtual ~SiModelClient() = default;
  // Returns the raw slot-tagged reply. Throws TransportError on failure.
  virtual std::string query(const std::string& question) = 0;
};

// POST {"question": ...} -> {"si": "..."} against a configured URL.
class HttpSiModelClient : public SiModelClient {
 public:
  HttpSiModelClient(std::string url, int timeout_ms);
  std::string query(const std::string& question) override;

 private:
  std::string url_;
  int timeout_ms_;
};

// Asks the model client; malformed replies fall back to generate_si_rules
// with a logged warning. Transport failures propagate as TransportError.
StructuredIntent generate_si_model(const Question& q, SiModelClient& client,
                                   const Catalog& catalog);

}  // namespace quasar
