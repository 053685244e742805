#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "quasar/answer.hpp"
#include "support.hpp"

using namespace quasar;

TEST_CASE("prompt layout") {
  EvidenceList evidence{testing::piece("a", "first piece"), testing::piece("b", "second")};
  CHECK(build_prompt("team Yao Ming", evidence) ==
        "SI: team Yao Ming Evidence: first piece | second");
  CHECK(build_prompt("x", {}) == "SI: x Evidence: ");
  CHECK(build_prompt(StructuredIntent{}, "raw question?", evidence) ==
        "SI: raw question? Evidence: first piece | second");
}

TEST_CASE("extractive oracle sums evidence scores per entity") {
  Catalog c = testing::sports_catalog();
  auto si = make_intent({"team"}, {"Wang Zhizhi"});
  EvidenceList evidence{
      testing::piece("a", "", {"Q1", "Q2"}, 0.5),
      testing::piece("b", "", {"Q7"}, 0.7),
      testing::piece("c", "", {"Q2"}, 0.4),
  };
  CHECK(extractive_oracle_generate(si, evidence, c) == "Dallas Mavericks");
  evidence[2].score = 0.1;
  CHECK(extractive_oracle_generate(si, evidence, c) == "Houston Rockets");
}

TEST_CASE("extractive oracle ties and refusals") {
  Catalog c = testing::sports_catalog();
  auto si = make_intent({}, {"Yao Ming"});
  EvidenceList tie{testing::piece("a", "", {"Q7"}, 1.0), testing::piece("b", "", {"Q2"}, 1.0)};
  CHECK(extractive_oracle_generate(si, tie, c) == "Houston Rockets");
  EvidenceList only_question{testing::piece("a", "", {"Q6"}, 1.0)};
  CHECK(extractive_oracle_generate(si, only_question, c) == "unknown");
  CHECK(extractive_oracle_generate(si, {}, c) == "unknown");
  EvidenceList alias_entity{testing::piece("a", "", {"Q2"}, 1.0)};
  CHECK(extractive_oracle_generate(make_intent({}, {"mavs"}), alias_entity, c) == "unknown");
}

TEST_CASE("support attaches pieces containing the answer") {
  Catalog c = testing::sports_catalog();
  EvidenceList evidence{testing::piece("a", "drafted by Dallas", {}),
                        testing::piece("b", "Mavericks fans", {"Q2"}),
                        testing::piece("c", "Houston Rockets", {"Q7"})};
  auto r = attach_support("Dallas Mavericks", evidence, c);
  CHECK(r.answer() == "Dallas Mavericks");
  CHECK(r.supporting_evidence() == std::vector<std::string>{"a", "b"});
  CHECK(r.prompt_evidence_count() == 3);
  auto unknown = attach_support("unknown", evidence, c);
  CHECK(unknown.refrained());
  CHECK(unknown.supporting_evidence().empty());
  auto literal = attach_support("Houston", evidence, c);
  CHECK(literal.supporting_evidence() == std::vector<std::string>{"c"});
}

TEST_CASE("faithful transform marks exactly the records without the answer") {
  Catalog c = testing::sports_catalog();
  testing::Gen gen(40);
  int unknowns = 0;
  int absent = 0;
  for (int i = 0; i < 50; ++i) {
    bool present = gen.chance(0.6);
    TrainingRecord r{"r" + std::to_string(i), {}, "q", {}, "Dallas Mavericks"};
    r.evidence.push_back(testing::piece("x", "Yao Ming in Houston", {"Q6", "Q7"}));
    if (present) r.evidence.push_back(testing::piece("y", "joined the Mavs", {}));
    absent += present ? 0 : 1;
    auto out = faithful_transform(r, {"Dallas Mavericks"}, c);
    CHECK(out.target_answer == (present ? "Dallas Mavericks" : "unknown"));
    unknowns += out.target_answer == "unknown" ? 1 : 0;
  }
  CHECK(unknowns == absent);
}

TEST_CASE("training records export prompt and target") {
  auto path = std::filesystem::temp_directory_path() / "quasar_records_test.jsonl";
  TrainingRecord r{"r1", make_intent({"team"}, {}), "q", {testing::piece("a", "text")}, "X"};
  export_training_records(path, {r});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  Json j = Json::parse(line);
  CHECK(j.at("prompt") == "SI: team Evidence: text");
  CHECK(j.at("target") == "X");
  std::filesystem::remove(path);
}
