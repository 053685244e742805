#include "quasar/synthetic.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "quasar/bm25.hpp"
#include "quasar/text.hpp"

namespace quasar {

namespace {

constexpr std::size_t kRelationWords = 60;
constexpr std::size_t kFillerWords = 3000;
constexpr std::size_t kCueWords = 2;
const char* const kAnswerTypes[] = {"person", "team", "city", "year", "award", "company"};

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 rng_;
};

std::string word(const char* stem, std::size_t n) { return stem + std::to_string(n); }

struct Draft {
  std::vector<std::string> tokens;
  std::vector<std::string> entity_ids;
};

void add_filler(Draft& d, Draw& draw, std::size_t lo, std::size_t hi) {
  std::size_t n = draw.between(lo, hi);
  for (std::size_t i = 0; i < n; ++i) d.tokens.push_back(word("w", draw.below(kFillerWords)));
}

std::string cue(Draw& draw, bool relevant_style) {
  return word(relevant_style ? "cuer" : "cued", draw.below(kCueWords));
}

}  // namespace

SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& o) {
  if (o.questions == 0 || o.relevant_per_question == 0 || o.min_distractors > o.max_distractors ||
      o.noise_entities == 0) {
    throw std::invalid_argument("synthetic benchmark: bad options");
  }
  if (o.relevant_per_question + o.max_distractors > o.pool_size) {
    throw std::invalid_argument("synthetic benchmark: pool too small for planted pieces");
  }
  Draw draw(o.seed);
  std::vector<Entity> entities;
  for (std::size_t n = 0; n < o.noise_entities; ++n) {
    entities.push_back({word("n", n), word("noise", n), {}, false});
  }

  SyntheticBenchmark bench;
  for (std::size_t q = 0; q < o.questions; ++q) {
    std::string subject_id = word("s", q);
    std::string subject = word("subject", q);
    std::string answer_id = word("a", q);
    std::string answer = word("answer", q);
    entities.push_back({subject_id, subject, {}, false});
    entities.push_back({answer_id, answer, {}, false});

    std::string type = kAnswerTypes[draw.below(std::size(kAnswerTypes))];
    std::string rel1 = word("rel", draw.below(kRelationWords));
    std::string rel2 = word("rel", draw.below(kRelationWords));
    while (rel2 == rel1) rel2 = word("rel", draw.below(kRelationWords));

    std::vector<Draft> drafts;
    for (std::size_t r = 0; r < o.relevant_per_question; ++r) {
      Draft d;
      d.tokens = {subject, draw.chance(0.5) ? rel1 : rel2, answer};
      for (std::size_t slot = 0; slot < o.cue_slots; ++slot) {
        d.tokens.push_back(cue(draw, draw.chance(o.relevant_cue_rate)));
      }
      add_filler(d, draw, 2, 4);
      d.entity_ids = {subject_id, answer_id};
      drafts.push_back(std::move(d));
    }
    std::size_t distractors = draw.between(o.min_distractors, o.max_distractors);
    for (std::size_t j = 0; j < distractors; ++j) {
      std::string decoy_id = subject_id + "d" + std::to_string(j);
      entities.push_back({decoy_id, subject + "decoy" + std::to_string(j), {}, false});
      Draft d;
      d.tokens = {subject, rel1, subject, rel2, entities.back().label};
      for (std::size_t slot = 0; slot < o.cue_slots; ++slot) {
        d.tokens.push_back(cue(draw, draw.chance(o.distractor_cue_rate)));
      }
      add_filler(d, draw, 1, 2);
      d.entity_ids = {subject_id, decoy_id};
      drafts.push_back(std::move(d));
    }
    while (drafts.size() < o.pool_size) {
      Draft d;
      add_filler(d, draw, 3, 5);
      std::size_t noise = draw.below(o.noise_entities);
      d.tokens.push_back(word("noise", noise));
      d.entity_ids = {word("n", noise)};
      if (draw.chance(o.noise_query_rate)) {
        d.tokens.push_back(subject);
        d.entity_ids.push_back(subject_id);
      }
      drafts.push_back(std::move(d));
    }
    draw.shuffle(drafts);

    EvidenceList pieces;
    pieces.reserve(drafts.size());
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      EvidencePiece p;
      p.id = "q" + std::to_string(q) + ":" + std::to_string(i);
      p.source = SourceType::kText;
      p.text = join(drafts[i].tokens, " ");
      p.entity_ids = std::move(drafts[i].entity_ids);
      p.provenance = {"synthetic" + std::to_string(q), static_cast<int>(i), subject};
      pieces.push_back(std::move(p));
    }

    SyntheticItem item;
    item.si = make_intent({type}, {subject}, rel1 + " " + rel2);
    item.question = {word("syn", q), "which " + type + " " + subject + " " + rel1 + " " + rel2,
                     {answer}};
    item.distractors = distractors;

    Bm25Index index = Bm25Index::build(pieces);
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < pieces.size(); ++i) position.emplace(pieces[i].id, i);
    std::vector<bool> used(pieces.size(), false);
    for (const auto& hit : index.search(si_concat(item.si, item.question.text), pieces.size())) {
      std::size_t i = position.at(hit.id);
      used[i] = true;
      item.pool.push_back(pieces[i]);
      item.pool.back().score = hit.score;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (!used[i]) rest.push_back(i);
    }
    std::sort(rest.begin(), rest.end(),
              [&](std::size_t a, std::size_t b) { return pieces[a].id < pieces[b].id; });
    for (std::size_t i : rest) item.pool.push_back(pieces[i]);
    bench.items.push_back(std::move(item));
  }
  bench.catalog = std::make_shared<const Catalog>(std::move(entities));
  return bench;
}

std::vector<LabeledPool> labeled_pools(const SyntheticBenchmark& bench, std::size_t begin,
                                       std::size_t end) {
  end = std::min(end, bench.items.size());
  std::vector<LabeledPool> out;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& item = bench.items[i];
    out.push_back({item.question.id, item.si, item.question.text, item.pool,
                   item.question.gold_answers});
  }
  return out;
}

std::shared_ptr<const FixedIntentStage> synthetic_intents(const SyntheticBenchmark& bench) {
  std::unordered_map<std::string, StructuredIntent> intents;
  for (const auto& item : bench.items) intents.emplace(item.question.id, item.si);
  return std::make_shared<FixedIntentStage>(std::move(intents), *bench.catalog);
}

std::shared_ptr<const FixedPoolSource> synthetic_pools(const SyntheticBenchmark& bench) {
  std::unordered_map<std::string, EvidenceList> pools;
  for (const auto& item : bench.items) pools.emplace(item.question.id, item.pool);
  return std::make_shared<FixedPoolSource>(std::move(pools));
}

}  // namespace quasar
