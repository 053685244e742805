#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace quasar {

// A lowercase word token together with its byte range in the source text.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Word characters are ASCII letters and digits plus every non-ASCII byte, so
// UTF-8 words are kept whole. Everything else separates tokens.
bool is_word_byte(unsigned char c);

std::vector<Token> tokenize_spans(std::string_view text);

// Lowercase alphanumeric word split used by BM25, anchoring and Jaccard.
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Lowercase, punctuation to spaces, collapsed whitespace, leading article
// (a, an, the) dropped unless it is the only word.
std::string normalize_answer(std::string_view text);

// True when needle occurs in haystack on word boundaries. Both arguments are
// expected to be normalize_answer() output.
bool contains_phrase(std::string_view haystack, std::string_view needle);

}  // namespace quasar
