#include "quasar/text.hpp"

#include <cctype>

namespace quasar {

bool is_word_byte(unsigned char c) {
  return c >= 0x80 || std::isalnum(c) != 0;
}

std::vector<Token> tokenize_spans(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    Token token;
    token.begin = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
      token.text.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(text[i]))));
      ++i;
    }
    token.end = i;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& token : tokenize_spans(text)) out.push_back(std::move(token.text));
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view text) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string normalize_answer(std::string_view text) {
  std::vector<std::string> words = tokenize(text);
  if (words.size() > 1 &&
      (words.front() == "a" || words.front() == "an" || words.front() == "the")) {
    words.erase(words.begin());
  }
  return join(words, " ");
}

bool contains_phrase(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::size_t pos = haystack.find(needle);
  while (pos != std::string_view::npos) {
    bool left_ok = pos == 0 || haystack[pos - 1] == ' ';
    std::size_t end = pos + needle.size();
    bool right_ok = end == haystack.size() || haystack[end] == ' ';
    if (left_ok && right_ok) return true;
    pos = haystack.find(needle, pos + 1);
  }
  return false;
}

}  // namespace quasar
