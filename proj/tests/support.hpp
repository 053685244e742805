#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "quasar/core.hpp"
#include "quasar/engine.hpp"
#include "quasar/ingest.hpp"
#include "quasar/io.hpp"

namespace quasar::testing {

// Seeded draws for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool chance(double p) { return unit() < p; }

  std::string word(std::size_t vocabulary) { return "w" + std::to_string(below(vocabulary)); }

  std::vector<std::string> words(std::size_t count, std::size_t vocabulary) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(word(vocabulary));
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

inline EvidencePiece piece(std::string id, std::string text,
                           std::vector<std::string> entity_ids = {}, double score = 0.0) {
  EvidencePiece p;
  p.id = std::move(id);
  p.text = std::move(text);
  p.entity_ids = std::move(entity_ids);
  p.score = score;
  return p;
}

// Brute-force Okapi BM25 straight from the definition: every document is
// rescanned for every term.
inline double reference_bm25(const std::vector<std::vector<std::string>>& docs, std::size_t d,
                             const std::vector<std::string>& query, double k1, double b) {
  const double n = static_cast<double>(docs.size());
  double total_length = 0.0;
  for (const auto& doc : docs) total_length += static_cast<double>(doc.size());
  const double avgdl = total_length / n;
  std::set<std::string> seen;
  double score = 0.0;
  for (const auto& term : query) {
    if (!seen.insert(term).second) continue;
    double df = 0.0;
    for (const auto& doc : docs) {
      for (const auto& w : doc) {
        if (w == term) {
          df += 1.0;
          break;
        }
      }
    }
    double tf = 0.0;
    for (const auto& w : docs[d]) tf += w == term ? 1.0 : 0.0;
    if (tf == 0.0) continue;
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    const double dl = static_cast<double>(docs[d].size());
    score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avgdl));
  }
  return score;
}

inline std::filesystem::path toy_dir() { return std::filesystem::path(QUASAR_DATA_DIR) / "toy"; }

// Ingests the bundled toy corpus in memory, as `quasar ingest` followed by
// `quasar index` would.
inline Corpus toy_corpus() {
  const auto dir = toy_dir();
  auto catalog = std::make_shared<const Catalog>(read_catalog(dir / "catalog.jsonl"));
  Corpus corpus;
  corpus.catalog = catalog;
  corpus.pool = verbalize_corpus(read_kg_facts(dir / "kg_facts.jsonl"),
                                 read_tables(dir / "tables.jsonl"),
                                 read_text_docs(dir / "text_docs.jsonl"), *catalog);
  corpus.index = Bm25Index::build(corpus.pool);
  return corpus;
}

inline std::vector<Question> toy_questions() {
  return read_benchmark(toy_dir() / "questions.jsonl");
}

inline Catalog sports_catalog() {
  return Catalog({
      {"Q1", "Wang Zhizhi", {"Zhizhi"}, false},
      {"Q2", "Dallas Mavericks", {"Dallas", "Mavs"}, false},
      {"Q3", "NBA", {"National Basketball Association"}, false},
      {"Q4", "China", {"Chinese"}, true},
      {"Q5", "Beijing", {}, true},
      {"Q6", "Yao Ming", {}, false},
      {"Q7", "Houston Rockets", {"Houston"}, false},
  });
}

}  // namespace quasar::testing
