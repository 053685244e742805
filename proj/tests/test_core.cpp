#include <doctest.h>

#include <sstream>

#include "quasar/core.hpp"
#include "quasar/error.hpp"
#include "quasar/io.hpp"
#include "quasar/text.hpp"
#include "support.hpp"

using namespace quasar;

TEST_CASE("tokenize lowercases and splits on punctuation") {
  CHECK(tokenize("Wang Zhizhi, 2000-2001!") ==
        std::vector<std::string>{"wang", "zhizhi", "2000", "2001"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ,;  ").empty());
  auto spans = tokenize_spans("Hi, Yao");
  REQUIRE(spans.size() == 2);
  CHECK(spans[1].text == "yao");
  CHECK(spans[1].begin == 4);
  CHECK(spans[1].end == 7);
}

TEST_CASE("tokenize keeps UTF-8 words whole") {
  CHECK(tokenize("Zürich café") == std::vector<std::string>{"zürich", "café"});
}

TEST_CASE("normalize_answer") {
  CHECK(normalize_answer("The Dallas Mavericks!") == "dallas mavericks");
  CHECK(normalize_answer("  A  ") == "a");
  CHECK(normalize_answer("an apple") == "apple");
  CHECK(normalize_answer("Wang-Zhizhi") == "wang zhizhi");
  CHECK(normalize_answer("") == "");
}

TEST_CASE("contains_phrase respects word boundaries") {
  CHECK(contains_phrase("yao ming played", "yao ming"));
  CHECK(contains_phrase("he is yao", "yao"));
  CHECK_FALSE(contains_phrase("yaoming", "yao"));
  CHECK_FALSE(contains_phrase("nba", "nbaa"));
  CHECK_FALSE(contains_phrase("x", ""));
}

TEST_CASE("structured intent helpers") {
  auto si = make_intent({" team ", ""}, {"Wang Zhizhi"}, "  play for ", "", " ");
  CHECK(si.ans_type == std::vector<std::string>{"team"});
  CHECK(si.relation == std::optional<std::string>("play for"));
  CHECK_FALSE(si.time.has_value());
  CHECK_FALSE(si.location.has_value());
  CHECK(si_concat(si, "fallback") == "team Wang Zhizhi play for");
  CHECK(StructuredIntent{}.empty());
  CHECK(si_concat(StructuredIntent{}, "raw question") == "raw question");
}

TEST_CASE("answer results and refraining") {
  CHECK(is_unknown_answer(" Unknown "));
  CHECK_FALSE(is_unknown_answer("unknowns"));
  AnswerResult r("unknown", {}, 3);
  CHECK(r.refrained());
  AnswerResult a("Dallas Mavericks", {"kg:F1"}, 3);
  CHECK_FALSE(a.refrained());
  CHECK(AnswerResult().refrained());
}

TEST_CASE("catalog lookups") {
  Catalog c = testing::sports_catalog();
  CHECK(c.size() == 7);
  CHECK(c.at("Q2").label == "Dallas Mavericks");
  CHECK(c.find("Q99") == nullptr);
  CHECK_THROWS_AS(c.at("Q99"), CatalogError);
  const auto* ids = c.ids_for_name("dallas");
  REQUIRE(ids != nullptr);
  CHECK(*ids == std::vector<std::string>{"Q2"});
  CHECK(c.max_name_tokens() == 3);
  CHECK(c.match_answer("the Mavs") == std::vector<std::string>{"Q2"});
  CHECK(c.match_answer("nobody").empty());
  CHECK(c.has_location_flags());
}

TEST_CASE("catalog rejects bad entities") {
  CHECK_THROWS_AS(Catalog({{"Q1", "A", {}, false}, {"Q1", "B", {}, false}}), CatalogError);
  CHECK_THROWS_AS(Catalog({{"", "A", {}, false}}), CatalogError);
  CHECK_THROWS_AS(Catalog({{"Q1", " ", {}, false}}), CatalogError);
  CHECK_THROWS_AS(Catalog({{"Q1", "Alpha", {"Al", "AL"}, false}}), CatalogError);
}

TEST_CASE("shared names stay ambiguous") {
  Catalog c({{"Q2", "Alpha", {}, false}, {"Q1", "Beta", {"ALPHA"}, false}});
  const auto* ids = c.ids_for_name("alpha");
  REQUIRE(ids != nullptr);
  CHECK(*ids == std::vector<std::string>{"Q1", "Q2"});
}

TEST_CASE("source type names round trip") {
  for (auto s : {SourceType::kKg, SourceType::kText, SourceType::kTable}) {
    CHECK(parse_source_type(to_string(s)) == s);
  }
  CHECK_THROWS(parse_source_type("video"));
}

TEST_CASE("evidence pieces round trip through JSON") {
  EvidencePiece p = testing::piece("table:T1:0", "Wang Zhizhi / x", {"Q1"}, 2.5);
  p.source = SourceType::kTable;
  p.provenance = {"T1", 0, "Wang Zhizhi"};
  Json j = p;
  CHECK(j.at("source") == "TABLE");
  CHECK(j.get<EvidencePiece>() == p);
}

TEST_CASE("intent and question JSON") {
  auto si = make_intent({"team"}, {"Wang Zhizhi"}, "play for", "2000", "");
  Json j = si;
  CHECK(j.get<StructuredIntent>() == si);
  Question q{"q1", "who?", {"A", "B"}};
  Json jq = q;
  CHECK(jq.get<Question>() == q);
}

TEST_CASE("record reader reports the failing line") {
  std::istringstream in("{\"id\": \"a\"}\n\nnot json\n");
  std::size_t seen = 0;
  try {
    for_each_record(in, [&](const Json&, std::size_t) { ++seen; });
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.category() == ErrorCategory::kParse);
  }
  CHECK(seen == 1);
}

TEST_CASE("record reader wraps rejected records") {
  std::istringstream in("{\"id\": 5}\n");
  CHECK_THROWS_AS(for_each_record(in, [](const Json& j, std::size_t) {
                    (void)j.at("id").get<std::string>();
                  }),
                  ParseError);
}

TEST_CASE("missing files are io errors") {
  CHECK_THROWS_AS(read_pool("/nonexistent/pool.jsonl"), IoError);
}

TEST_CASE("error category names") {
  CHECK(std::string(category_name(ErrorCategory::kTransport)) == "transport");
  TransportError t("http://x", "refused");
  CHECK(t.retriable());
  CHECK(t.endpoint() == "http://x");
}
