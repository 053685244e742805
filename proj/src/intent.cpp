#include "quasar/intent.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>
#include <vector>

#include "quasar/error.hpp"
#include "quasar/http.hpp"
#include "quasar/ingest.hpp"
#include "quasar/text.hpp"

namespace quasar {

namespace {

const std::unordered_set<std::string>& function_words() {
  static const std::unordered_set<std::string> words = {
      "is", "was", "are", "were", "be", "been", "did", "does", "do", "has",
      "have", "had", "the", "a", "an", "of", "in", "on", "to", "for", "will",
      "would", "can", "could"};
  return words;
}

// Words carrying no relation content: auxiliaries and articles.
const std::unordered_set<std::string>& filler_words() {
  static const std::unordered_set<std::string> words = {
      "is", "was", "are", "were", "be", "been", "did", "does", "do", "has", "have",
      "had", "the", "a", "an", "will", "would", "can", "could"};
  return words;
}

const std::unordered_set<std::string>& ordinal_cues() {
  static const std::unordered_set<std::string> words = {
      "first", "second", "third", "fourth", "fifth", "last", "latest",
      "earliest", "recent", "recently", "current", "currently"};
  return words;
}

const std::unordered_set<std::string>& relative_cues() {
  static const std::unordered_set<std::string> words = {"before", "after", "during",
                                                        "since", "until"};
  return words;
}

const std::unordered_set<std::string>& time_prepositions() {
  static const std::unordered_set<std::string> words = {"in", "on", "at", "by"};
  return words;
}

bool is_year(const std::string& token) {
  return token.size() == 4 &&
         std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Answer type for the wh-word at index wh, or empty.
std::string answer_type(const std::vector<Token>& tokens, std::size_t wh) {
  const std::string& w = tokens[wh].text;
  if (w == "who" || w == "whom" || w == "whose") return "person";
  if (w == "when") return "date";
  if (w == "where") return "location";
  if (wh + 1 < tokens.size()) {
    const std::string& next = tokens[wh + 1].text;
    if (w == "how" && (next == "many" || next == "much")) return "number";
    if ((w == "which" || w == "what") && function_words().count(next) == 0) return next;
  }
  return {};
}

}  // namespace

StructuredIntent generate_si_rules(const Question& q, const Catalog& catalog) {
  const std::vector<Token> tokens = tokenize_spans(q.text);
  const std::vector<MentionSpan> spans = find_mentions(tokens, catalog);

  std::vector<bool> consumed(tokens.size(), false);
  std::vector<std::string> entities;
  std::vector<std::string> locations;
  std::unordered_set<std::string> seen;
  for (const auto& span : spans) {
    for (std::size_t t = span.token_begin; t < span.token_end; ++t) consumed[t] = true;
    for (const auto& id : span.entity_ids) {
      if (!seen.insert(id).second) continue;
      const Entity& e = catalog.at(id);
      entities.push_back(e.label);
      if (e.is_location) locations.push_back(e.label);
    }
  }

  std::vector<std::string> ans_type;
  static const std::array<std::string_view, 8> kWh = {"who",   "whom",  "whose", "when",
                                                      "where", "which", "what",  "how"};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (consumed[i]) continue;
    if (std::find(kWh.begin(), kWh.end(), tokens[i].text) == kWh.end()) continue;
    std::string type = answer_type(tokens, i);
    if (!type.empty()) {
      ans_type.push_back(type);
      // "which team", "how many": the word after the wh-word is not relation text.
      if (i + 1 < tokens.size() && !consumed[i + 1]) consumed[i + 1] = true;
    }
    consumed[i] = true;
    // A preposition fronting the wh-word ("in which city").
    for (std::size_t j = 0; j < i; ++j) {
      if (function_words().count(tokens[j].text) > 0) consumed[j] = true;
    }
    break;
  }

  std::vector<std::string> time_cues;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i].text;
    auto surface = [&](std::size_t k) {
      return q.text.substr(tokens[k].begin, tokens[k].end - tokens[k].begin);
    };
    std::size_t cue_begin = i;
    if (is_year(t) || ordinal_cues().count(t) > 0) {
      time_cues.push_back(surface(i));
      consumed[i] = true;
    } else if (relative_cues().count(t) > 0 && i + 1 < tokens.size()) {
      time_cues.push_back(surface(i) + " " + surface(i + 1));
      consumed[i] = consumed[i + 1] = true;
      ++i;
    } else {
      continue;
    }
    // "in the 2001 season": the preposition introducing the cue is not relation text.
    std::size_t j = cue_begin;
    if (j > 0 && tokens[j - 1].text == "the") --j;
    if (j > 0 && time_prepositions().count(tokens[j - 1].text) > 0) {
      for (std::size_t k = j - 1; k < cue_begin; ++k) consumed[k] = true;
    }
  }

  std::vector<std::string> relation;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (consumed[i] || filler_words().count(tokens[i].text) > 0) continue;
    relation.push_back(q.text.substr(tokens[i].begin, tokens[i].end - tokens[i].begin));
  }

  return make_intent(std::move(ans_type), std::move(entities), join(relation, " "),
                     join(time_cues, " "), join(locations, ", "));
}

std::string format_si(const StructuredIntent& si) {
  return "Ans-Type: " + join(si.ans_type, ", ") + " | Entities: " +
         join(si.entities, ", ") + " | Relation: " + si.relation.value_or("") +
         " | Time: " + si.time.value_or("") + " | Location: " + si.location.value_or("");
}

std::optional<StructuredIntent> parse_si_reply(std::string_view reply) {
  if (trim(reply).empty()) return std::nullopt;

  auto split = [](std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto pos = s.find(sep, start);
      out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return out;
  };

  std::vector<std::string> ans_type;
  std::vector<std::string> entities;
  std::string relation;
  std::string time;
  std::string location;
  int known = 0;
  for (const auto& segment : split(reply, '|')) {
    if (trim(segment).empty()) continue;
    auto colon = segment.find(':');
    if (colon == std::string::npos) return std::nullopt;
    std::string label = to_lower(trim(segment.substr(0, colon)));
    std::string value = trim(segment.substr(colon + 1));
    if (label == "ans-type" || label == "ans_type" || label == "answer type") {
      ans_type = split(value, ',');
    } else if (label == "entities") {
      entities = split(value, ',');
    } else if (label == "relation") {
      relation = value;
    } else if (label == "time") {
      time = value;
    } else if (label == "location") {
      location = value;
    } else {
      continue;
    }
    ++known;
  }
  if (known == 0) return std::nullopt;
  return make_intent(std::move(ans_type), std::move(entities), relation, time, location);
}

HttpSiModelClient::HttpSiModelClient(std::string url, int timeout_ms)
    : url_(std::move(url)), timeout_ms_(timeout_ms) {}

std::string HttpSiModelClient::query(const std::string& question) {
  Json reply = post_json(url_, Json{{"question", question}}, timeout_ms_);
  auto it = reply.find("si");
  if (it == reply.end() || !it->is_string()) {
    throw TransportError(url_, "reply lacks string field 'si'");
  }
  return it->get<std::string>();
}

StructuredIntent generate_si_model(const Question& q, SiModelClient& client,
                                   const Catalog& catalog) {
  std::string reply = client.query(q.text);
  if (auto si = parse_si_reply(reply)) return *si;
  log_warning("malformed intent reply for question '" + q.id +
              "', falling back to rules");
  return generate_si_rules(q, catalog);
}

}  // namespace quasar
