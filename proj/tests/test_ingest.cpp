#include <doctest.h>

#include "quasar/error.hpp"
#include "quasar/ingest.hpp"
#include "support.hpp"

using namespace quasar;

namespace {

TableDoc wang_table() {
  return {"T1",
          "Wang Zhizhi",
          {"NBA Career"},
          {"Season", "Team", "Games Played"},
          {{"2000-2001", "Dallas", "5"}, {"2001-2002", "Dallas", ""}}};
}

}  // namespace

TEST_CASE("table row verbalization matches the reference string byte for byte") {
  Catalog c = testing::sports_catalog();
  EvidencePiece p = verbalize_table_row(wang_table(), 0, c);
  CHECK(p.text == "Wang Zhizhi / NBA Career / Season: 2000-2001, Team: Dallas, Games Played: 5");
  CHECK(p.id == "table:T1:0");
  CHECK(p.source == SourceType::kTable);
  CHECK(p.provenance == Provenance{"T1", 0, "Wang Zhizhi"});
  CHECK(p.entity_ids == std::vector<std::string>{"Q1", "Q3", "Q2"});
}

TEST_CASE("empty cells are skipped and bad rows rejected") {
  Catalog c = testing::sports_catalog();
  EvidencePiece p = verbalize_table_row(wang_table(), 1, c);
  CHECK(p.text == "Wang Zhizhi / NBA Career / Season: 2001-2002, Team: Dallas");
  CHECK_THROWS_AS(verbalize_table_row(wang_table(), 2, c), std::out_of_range);
}

TEST_CASE("text sentences carry the page prefix") {
  Catalog c = testing::sports_catalog();
  TextDoc doc{"D1", "Yao Ming", {}, {"Yao Ming joined Houston in 2002."}};
  EvidencePiece p = verbalize_text_sentence(doc, 0, c);
  CHECK(p.text == "Yao Ming / Yao Ming joined Houston in 2002.");
  CHECK(p.entity_ids == std::vector<std::string>{"Q6", "Q7"});
  CHECK(p.provenance == Provenance{"D1", 0, "Yao Ming"});
}

TEST_CASE("fact verbalization resolves labels and qualifiers") {
  Catalog c = testing::sports_catalog();
  KgFact f{"F1", "Q1", "member of sports team", "Q2", {{"start time", "2001"}, {"league", "Q3"}}};
  EvidencePiece p = verbalize_fact(f, c);
  CHECK(p.text == "Wang Zhizhi member of sports team Dallas Mavericks, start time: 2001, league: NBA");
  CHECK(p.entity_ids == std::vector<std::string>{"Q1", "Q2", "Q3"});
  CHECK(p.provenance == Provenance{"F1", -1, "Wang Zhizhi"});
  KgFact literal{"F2", "Q6", "height", "2.29 m", {}};
  CHECK(verbalize_fact(literal, c).entity_ids == std::vector<std::string>{"Q6"});
  KgFact orphan{"F3", "Q404", "x", "y", {}};
  CHECK_THROWS_AS(verbalize_fact(orphan, c), CatalogError);
}

TEST_CASE("breadth-first fact linearization") {
  Catalog c = testing::sports_catalog();
  std::vector<KgFact> facts{
      {"F1", "Q2", "league", "Q3", {}},
      {"F2", "Q1", "member of sports team", "Q2", {}},
      {"F3", "Q6", "member of sports team", "Q7", {}},
      {"F4", "Q1", "country", "Q4", {}},
  };
  auto depth1 = verbalize_kg(c.at("Q1"), facts, c, 1);
  REQUIRE(depth1.size() == 2);
  CHECK(depth1[0].id == "kg:F2");
  CHECK(depth1[1].id == "kg:F4");
  auto depth2 = verbalize_kg(c.at("Q1"), facts, c, 2);
  REQUIRE(depth2.size() == 3);
  CHECK(depth2[2].id == "kg:F1");
}

TEST_CASE("longest match wins over nested names") {
  Catalog c({{"E1", "New York", {}, true}, {"E2", "New York Knicks", {}, false}});
  auto tokens = tokenize_spans("the New York Knicks beat New York");
  auto spans = find_mentions(tokens, c);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].token_begin == 1);
  CHECK(spans[0].token_end == 4);
  CHECK(spans[0].entity_ids == std::vector<std::string>{"E2"});
  CHECK(spans[1].entity_ids == std::vector<std::string>{"E1"});
  CHECK(extract_entity_mentions("New York and New York Knicks", c) ==
        std::vector<std::string>{"E1", "E2"});
}

TEST_CASE("mentions need whole tokens") {
  Catalog c({{"E1", "Yao", {}, false}});
  CHECK(extract_entity_mentions("Yaoming", c).empty());
  CHECK(extract_entity_mentions("YAO!", c) == std::vector<std::string>{"E1"});
}

TEST_CASE("corpus order: facts by subject, then tables, then text") {
  Catalog c = testing::sports_catalog();
  std::vector<KgFact> facts{{"F1", "Q6", "a", "Q7", {}}, {"F2", "Q1", "b", "Q2", {}},
                            {"F3", "Q6", "c", "x", {}}};
  std::vector<TextDoc> docs{{"D1", "Yao Ming", {}, {"s0", "s1"}}};
  auto pool = verbalize_corpus(facts, {wang_table()}, docs, c);
  std::vector<std::string> ids;
  for (const auto& p : pool) ids.push_back(p.id);
  CHECK(ids == std::vector<std::string>{"kg:F1", "kg:F3", "kg:F2", "table:T1:0", "table:T1:1",
                                        "text:D1:0", "text:D1:1"});
}

TEST_CASE("bundled toy corpus covers all three sources") {
  Corpus corpus = testing::toy_corpus();
  std::map<SourceType, int> counts;
  for (const auto& p : corpus.pool) ++counts[p.source];
  CHECK(corpus.pool.size() >= 40);
  CHECK(corpus.pool.size() <= 60);
  CHECK(counts[SourceType::kKg] > 0);
  CHECK(counts[SourceType::kTable] > 0);
  CHECK(counts[SourceType::kText] > 0);
}

TEST_CASE("malformed input records are parse errors") {
  Json bad = {{"id", "T9"}, {"page_title", "x"}, {"headers", "not a list"}, {"rows", Json::array()}};
  CHECK_THROWS(bad.get<TableDoc>());
}
