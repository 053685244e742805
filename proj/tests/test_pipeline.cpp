#include <doctest.h>

#include <cstdlib>

#include "quasar/benchmark.hpp"
#include "quasar/config.hpp"
#include "quasar/engine.hpp"
#include "quasar/error.hpp"
#include "quasar/pipeline.hpp"
#include "support.hpp"

using namespace quasar;

namespace {

Config toy_config() { return Config::load(testing::toy_dir() / "config.json"); }

class ThrowingIntent : public IntentStage {
 public:
  StructuredIntent understand(const Question& q) const override {
    if (q.id == "bad") throw std::runtime_error("intent failed");
    return {};
  }
};

}  // namespace

TEST_CASE("config defaults and overrides") {
  Config c = Config::from_json(Json::object());
  CHECK(c.rerank.mode == "ce");
  CHECK(c.answer.generator == "oracle");
  CHECK(c.rerank.stages == std::vector<RerankStage>{{1000, 100}, {100, 30}});
  Json stages = Json::array({Json::array({500, 50})});
  Json j = {{"rerank", {{"mode", "bm25"}, {"stages", stages}}},
            {"retrieval", {{"pool_p", 500}}},
            {"eval", {{"ks", {5, 30}}}},
            {"seed", 9}};
  Config d = Config::from_json(j);
  CHECK(d.rerank.mode == "bm25");
  CHECK(d.schedule().stages() == std::vector<RerankStage>{{500, 50}});
  CHECK(d.eval.ks == std::vector<std::size_t>{5, 30});
  CHECK(d.seed == 9);
  CHECK(Config::from_json(d.to_json()).to_json() == d.to_json());
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(Config::from_json({{"retreival", Json::object()}}), ConfigError);
  CHECK_THROWS_AS(Config::from_json({{"rerank", {{"mdoe", "ce"}}}}), ConfigError);
  CHECK_THROWS_AS(Config::from_json({{"rerank", {{"mode", "magic"}}}}), ConfigError);
  Json short_pool = {{"rerank", {{"stages", Json::array({Json::array({500, 50})})}}}};
  CHECK_THROWS_AS(Config::from_json(short_pool), ConfigError);
  CHECK_THROWS_AS(Config::from_json({{"seed", "nine"}}), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/config.json"), IoError);
}

TEST_CASE("pool and final sizes rebuild the schedule") {
  Config c;
  c.set_final_k(5);
  CHECK(c.rerank.stages == std::vector<RerankStage>{{1000, 100}, {100, 5}});
  c.set_pool_p(200);
  CHECK(c.rerank.stages == std::vector<RerankStage>{{200, 100}, {100, 5}});
  c.set_final_k(150);
  CHECK(c.rerank.stages == std::vector<RerankStage>{{200, 150}});
  c.set_final_k(200);
  CHECK(c.rerank.stages.empty());
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("environment supplies endpoints") {
  setenv("QUASAR_GENERATOR_URL", "http://gen.local/x", 1);
  setenv("QUASAR_SCORER_URL_2", "http://ce2.local/x", 1);
  Config c;
  c.apply_environment();
  CHECK(c.answer.generator_url == "http://gen.local/x");
  CHECK(c.rerank.stage1_scorer_url.empty());
  CHECK(c.rerank.stage2_scorer_url == "http://ce2.local/x");
  unsetenv("QUASAR_GENERATOR_URL");
  unsetenv("QUASAR_SCORER_URL_2");
}

TEST_CASE("factories check their prerequisites") {
  Catalog catalog = testing::sports_catalog();
  Config c;
  c.rerank.mode = "gnn";
  CHECK_THROWS_AS(make_scorer(c, catalog), ConfigError);
  Config remote;
  remote.answer.generator = "remote";
  CHECK_THROWS_AS(make_answer_stage(remote, catalog), ConfigError);
  Config model;
  model.qu.mode = "model";
  CHECK_THROWS_AS(make_intent_stage(model, catalog), ConfigError);
  CHECK_THROWS_AS(Pipeline(catalog, nullptr, nullptr, RerankSchedule(), nullptr, nullptr),
                  ConfigError);
}

TEST_CASE("toy corpus answers every question") {
  Corpus corpus = testing::toy_corpus();
  Config config = toy_config();
  Pipeline pipeline = make_pipeline(config, *corpus.catalog, make_evidence_source(config, corpus));
  auto questions = testing::toy_questions();
  REQUIRE(questions.size() == 10);
  EvalReport report = run_benchmark(pipeline, questions, {5, 30}, 1);
  for (const auto& row : report.rows) {
    CAPTURE(row.id);
    CAPTURE(row.predicted);
    CHECK(row.correct);
    CHECK(row.answer_present);
    CHECK(row.error.empty());
  }
  CHECK(report.p_at_1 >= 0.9);
  CHECK(report.ap_at.at(30) == 1.0);
}

TEST_CASE("toy trace carries evidence with provenance") {
  Corpus corpus = testing::toy_corpus();
  Config config = toy_config();
  Pipeline pipeline = make_pipeline(config, *corpus.catalog, make_evidence_source(config, corpus));
  auto trace = pipeline.run({"x", "Which team drafted Yao Ming?", {}});
  CHECK(trace.result.answer() == "Houston Rockets");
  CHECK(trace.final_evidence.size() == 5);
  REQUIRE(trace.stage_outputs.size() == 2);
  CHECK(trace.stage_outputs[1].size() == 5);
  CHECK_FALSE(trace.result.supporting_evidence().empty());
  for (const auto& p : trace.final_evidence) CHECK_FALSE(p.provenance.doc.empty());
}

TEST_CASE("evaluation is deterministic across runs and job counts") {
  Corpus corpus = testing::toy_corpus();
  Config config = toy_config();
  Pipeline pipeline = make_pipeline(config, *corpus.catalog, make_evidence_source(config, corpus));
  auto questions = testing::toy_questions();
  auto a = run_benchmark(pipeline, questions, {5, 30}, 1);
  auto b = run_benchmark(pipeline, questions, {30, 5, 5}, 4);
  CHECK(a.to_jsonl() == b.to_jsonl());
  CHECK(a.to_table() == b.to_table());
  CHECK(a.ks == std::vector<std::size_t>{5, 30});
}

TEST_CASE("an empty corpus answers unknown") {
  Catalog catalog = testing::sports_catalog();
  Corpus corpus;
  corpus.catalog = std::make_shared<const Catalog>(catalog);
  Config config;
  Pipeline pipeline = make_pipeline(config, catalog, make_evidence_source(config, corpus));
  auto trace = pipeline.run({"q", "Which team drafted Yao Ming?", {}});
  CHECK(trace.result.answer() == "unknown");
  CHECK(trace.result.refrained());
}

TEST_CASE("snapshot choice follows nominal stage sizes") {
  PipelineTrace trace;
  trace.pool = {testing::piece("pool", "")};
  trace.stage_outputs = {{testing::piece("s1", "")}, {testing::piece("s2", "")}};
  RerankSchedule schedule({{1000, 100}, {100, 30}});
  CHECK(snapshot_for(trace, schedule, 30)[0].id == "s2");
  CHECK(snapshot_for(trace, schedule, 31)[0].id == "s1");
  CHECK(snapshot_for(trace, schedule, 100)[0].id == "s1");
  CHECK(snapshot_for(trace, schedule, 1000)[0].id == "pool");
  CHECK(snapshot_for(trace, schedule, 5000)[0].id == "pool");
}

TEST_CASE("failed questions are recorded and the run continues") {
  Catalog catalog = testing::sports_catalog();
  auto pools = std::unordered_map<std::string, EvidenceList>{
      {"ok", {testing::piece("a", "Houston Rockets", {"Q7"}, 1.0)}}};
  Pipeline pipeline(catalog, std::make_shared<ThrowingIntent>(),
                    std::make_shared<FixedPoolSource>(pools), RerankSchedule(std::vector<RerankStage>{}),
                    std::make_shared<PassthroughScorer>(),
                    std::make_shared<OracleAnswerStage>(catalog));
  auto report = run_benchmark(pipeline, {{"ok", "q", {"Houston Rockets"}}, {"bad", "q", {"x"}}},
                              {5}, 2);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].id == "bad");
  CHECK(report.rows[0].error == "intent failed");
  CHECK(report.rows[1].correct);
  CHECK(report.p_at_1 == 0.5);
}

TEST_CASE("report formats") {
  EvalReport report;
  report.ks = {5};
  EvalRow refrained{"a", "unknown", false, true, false, {{5, false}}, {{5, 0.0}}, ""};
  EvalRow correct{"b", "X", true, false, true, {{5, true}}, {{5, 0.5}}, ""};
  report.rows = {refrained, correct};
  report.summarize();
  CHECK(report.p_at_1 == 0.5);
  CHECK(report.refrain_rate == 0.5);
  CHECK(report.refrain_accuracy == std::optional<double>(1.0));
  CHECK(report.ap_at.at(5) == 0.5);
  CHECK(report.mrr_at.at(5) == 0.25);
  std::string jsonl = report.to_jsonl();
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 3);
  CHECK(jsonl.find("\"summary\"") != std::string::npos);
  std::string table = report.to_table();
  CHECK(table.find("refrain accuracy") != std::string::npos);
  CHECK(table.find("AP@5") != std::string::npos);
}
