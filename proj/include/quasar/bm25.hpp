#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quasar/core.hpp"

namespace quasar {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct Posting {
  std::uint32_t doc = 0;  // ordinal into Bm25Index::doc_ids()
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

struct ScoredDoc {
  std::string id;
  double score = 0.0;
};

/// Okapi BM25 over verbalized evidence. The idf term is the non-negative
/// variant ln(1 + (N - df + 0.5) / (df + 0.5)), so every document containing a
/// query term scores strictly above zero without clamping. Each distinct query
/// term contributes once.
///
/// Immutable after build(); concurrent searches need no locking.
class Bm25Index {
 public:
  static constexpr int kFormatVersion = 1;

  Bm25Index() = default;

  // Throws std::invalid_argument on an empty piece list or bad parameters.
  static Bm25Index build(const EvidenceList& pieces, Bm25Params params = {});

  // Documents with at least one query term, by descending score then id.
  // Empty when the query has no tokens or limit is 0.
  std::vector<ScoredDoc> search(std::string_view query, std::size_t limit) const;

  // Score of one document for already-tokenized distinct query terms.
  double score(std::uint32_t doc, std::span<const std::string> terms) const;

  // Distinct query tokens in first-occurrence order.
  static std::vector<std::string> query_terms(std::string_view query);

  std::size_t doc_count() const { return doc_ids_.size(); }
  double avg_doc_length() const { return avg_doc_length_; }
  const Bm25Params& params() const { return params_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  std::uint32_t doc_length(std::uint32_t doc) const { return doc_lengths_[doc]; }
  std::span<const Posting> postings(const std::string& term) const;
  std::size_t term_count() const { return postings_.size(); }

  // Record file: a versioned JSON header line, one line per document, then
  // one line per term in lexicographic order.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static Bm25Index load(std::istream& in);
  static Bm25Index load(const std::filesystem::path& path);

 private:
  double idf(std::size_t df) const;

  Bm25Params params_;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
};

}  // namespace quasar
