#include "quasar/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "quasar/error.hpp"
#include "quasar/io.hpp"
#include "quasar/text.hpp"

namespace quasar {

namespace {

void validate(const Bm25Params& p) {
  if (!(p.k1 > 0.0)) throw std::invalid_argument("bm25 k1 must be positive");
  if (!(p.b >= 0.0 && p.b <= 1.0)) throw std::invalid_argument("bm25 b must be in [0, 1]");
}

bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace

Bm25Index Bm25Index::build(const EvidenceList& pieces, Bm25Params params) {
  validate(params);
  if (pieces.empty()) throw std::invalid_argument("cannot build a BM25 index over no evidence");
  Bm25Index index;
  index.params_ = params;
  index.doc_ids_.reserve(pieces.size());
  index.doc_lengths_.reserve(pieces.size());
  double total = 0.0;
  for (std::uint32_t doc = 0; doc < pieces.size(); ++doc) {
    std::vector<std::string> tokens = tokenize(pieces[doc].text);
    index.doc_ids_.push_back(pieces[doc].id);
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    total += static_cast<double>(tokens.size());
    std::map<std::string, std::uint32_t> tf;
    for (auto& t : tokens) ++tf[t];
    for (auto& [term, count] : tf) index.postings_[term].push_back({doc, count});
  }
  index.avg_doc_length_ = total / static_cast<double>(pieces.size());
  return index;
}

std::vector<std::string> Bm25Index::query_terms(std::string_view query) {
  std::vector<std::string> terms;
  std::unordered_set<std::string> seen;
  for (auto& t : tokenize(query)) {
    if (seen.insert(t).second) terms.push_back(std::move(t));
  }
  return terms;
}

double Bm25Index::idf(std::size_t df) const {
  double n = static_cast<double>(doc_ids_.size());
  double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

std::span<const Posting> Bm25Index::postings(const std::string& term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

double Bm25Index::score(std::uint32_t doc, std::span<const std::string> terms) const {
  const double k1 = params_.k1;
  const double b = params_.b;
  double norm = avg_doc_length_ > 0.0 ? doc_lengths_[doc] / avg_doc_length_ : 0.0;
  double total = 0.0;
  for (const auto& term : terms) {
    auto list = postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](const Posting& p, std::uint32_t d) { return p.doc < d; });
    if (it == list.end() || it->doc != doc) continue;
    double tf = it->tf;
    total += idf(list.size()) * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
  }
  return total;
}

std::vector<ScoredDoc> Bm25Index::search(std::string_view query, std::size_t limit) const {
  std::vector<ScoredDoc> out;
  std::vector<std::string> terms = query_terms(query);
  if (terms.empty() || limit == 0 || doc_ids_.empty()) return out;

  const double k1 = params_.k1;
  const double b = params_.b;
  std::vector<double> acc(doc_ids_.size(), 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<bool> seen(doc_ids_.size(), false);
  for (const auto& term : terms) {
    auto list = postings(term);
    if (list.empty()) continue;
    double w = idf(list.size());
    for (const auto& p : list) {
      double tf = p.tf;
      double norm = doc_lengths_[p.doc] / avg_doc_length_;
      acc[p.doc] += w * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
      if (!seen[p.doc]) {
        seen[p.doc] = true;
        touched.push_back(p.doc);
      }
    }
  }
  out.reserve(touched.size());
  for (auto doc : touched) out.push_back({doc_ids_[doc], acc[doc]});
  std::size_t n = std::min(limit, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), out.end(),
                    ranks_before);
  out.resize(n);
  return out;
}

void Bm25Index::save(std::ostream& out) const {
  out << Json{{"format", "quasar-bm25"},
              {"version", kFormatVersion},
              {"k1", params_.k1},
              {"b", params_.b},
              {"doc_count", doc_ids_.size()},
              {"avg_doc_length", avg_doc_length_}}
             .dump()
      << '\n';
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    out << Json{{"doc", doc_ids_[d]}, {"length", doc_lengths_[d]}}.dump() << '\n';
  }
  std::map<std::string, const std::vector<Posting>*> sorted;
  for (const auto& [term, list] : postings_) sorted.emplace(term, &list);
  for (const auto& [term, list] : sorted) {
    Json plist = Json::array();
    for (const auto& p : *list) plist.push_back({p.doc, p.tf});
    out << Json{{"term", term}, {"postings", plist}}.dump() << '\n';
  }
}

void Bm25Index::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  save(out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Bm25Index Bm25Index::load(std::istream& in) {
  Bm25Index index;
  std::size_t doc_count = 0;
  bool header = false;
  for_each_record(in, [&](const Json& j, std::size_t) {
    if (!header) {
      if (j.value("format", std::string{}) != "quasar-bm25") {
        throw ParseError("not a BM25 index file");
      }
      int version = j.at("version").get<int>();
      if (version != kFormatVersion) {
        throw ParseError("unsupported index version " + std::to_string(version));
      }
      index.params_ = {j.at("k1").get<double>(), j.at("b").get<double>()};
      validate(index.params_);
      doc_count = j.at("doc_count").get<std::size_t>();
      index.avg_doc_length_ = j.at("avg_doc_length").get<double>();
      header = true;
    } else if (j.contains("doc")) {
      index.doc_ids_.push_back(j.at("doc").get<std::string>());
      index.doc_lengths_.push_back(j.at("length").get<std::uint32_t>());
    } else {
      auto& list = index.postings_[j.at("term").get<std::string>()];
      for (const auto& p : j.at("postings")) {
        Posting posting{p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()};
        if (posting.doc >= doc_count) throw ParseError("posting references unknown document");
        list.push_back(posting);
      }
    }
  });
  if (!header) throw ParseError("empty index file");
  if (index.doc_ids_.size() != doc_count) {
    throw ParseError("index declares " + std::to_string(doc_count) + " documents but lists " +
                     std::to_string(index.doc_ids_.size()));
  }
  return index;
}

Bm25Index Bm25Index::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return load(in);
}

}  // namespace quasar
