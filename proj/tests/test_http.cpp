#include <doctest.h>

#include <atomic>
#include <thread>

#include "quasar/answer.hpp"
#include "quasar/error.hpp"
#include "quasar/http.hpp"
#include "quasar/intent.hpp"
#include "quasar/pipeline.hpp"
#include "quasar/rerank.hpp"
#include "support.hpp"

// After Eigen: <resolv.h> defines a _res macro that collides with Eigen internals.
#include <httplib.h>

using namespace quasar;

namespace {

// Local stand-ins for the three model services.
class FakeServices {
 public:
  FakeServices() {
    server_.Post("/si", [this](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      Json body = Json::parse(req.body);
      last_question = body.at("question").get<std::string>();
      res.set_content(Json{{"si", "Ans-Type: team | Entities: Yao Ming | Relation: drafted"}}.dump(),
                      "application/json");
    });
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      Json body = Json::parse(req.body);
      double score = static_cast<double>(body.at("passage").get<std::string>().size());
      last_query = body.at("query").get<std::string>();
      res.set_content(Json{{"score", score}}.dump(), "application/json");
    });
    server_.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      Json body = Json::parse(req.body);
      last_prompt = body.at("prompt").get<std::string>();
      last_max_tokens = body.at("max_tokens").get<int>();
      res.set_content(Json{{"text", "  Houston Rockets\nextra line"}}.dump(), "application/json");
    });
    server_.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("boom", "text/plain");
    });
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("not json", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeServices() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::atomic<int> calls{0};
  std::string last_question;
  std::string last_query;
  std::string last_prompt;
  int last_max_tokens = 0;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

// A port nobody listens on.
std::string dead_url() {
  httplib::Server probe;
  int port = probe.bind_to_any_port("127.0.0.1");
  return "http://127.0.0.1:" + std::to_string(port) + "/x";
}

}  // namespace

TEST_CASE("intent model wire contract") {
  FakeServices services;
  Catalog c = testing::sports_catalog();
  HttpSiModelClient client(services.url("/si"), 2000);
  auto si = generate_si_model({"q", "Which team drafted Yao Ming?", {}}, client, c);
  CHECK(services.last_question == "Which team drafted Yao Ming?");
  CHECK(si.ans_type == std::vector<std::string>{"team"});
  CHECK(si.relation == std::optional<std::string>("drafted"));
}

TEST_CASE("cross-encoder wire contract") {
  FakeServices services;
  auto client = std::make_shared<HttpCrossEncoderClient>(services.url("/score"), 2000);
  auto si = make_intent({"team"}, {"Yao Ming"}, "drafted");
  EvidencePiece p = testing::piece("a", "abcde");
  CHECK(ce_score(si, p, client.get()) == 5.0);
  CHECK(services.last_query == "team Yao Ming drafted");

  CeScorer scorer({client});
  EvidenceList survivors{testing::piece("a", "xx"), testing::piece("b", "xxxx")};
  CHECK(scorer.score(si, "q", survivors, 0) == std::vector<double>{2.0, 4.0});
  CHECK(scorer.score(si, "q", survivors, 3) == std::vector<double>{2.0, 4.0});
}

TEST_CASE("generator wire contract") {
  FakeServices services;
  HttpGeneratorClient client(services.url("/generate"), 2000);
  CHECK(generate(client, {"SI: x Evidence: y", 7}) == "Houston Rockets");
  CHECK(services.last_prompt == "SI: x Evidence: y");
  CHECK(services.last_max_tokens == 7);
}

TEST_CASE("transport failures name the endpoint") {
  FakeServices services;
  Json body = {{"a", 1}};
  for (const auto& url : {services.url("/broken"), services.url("/garbage"), dead_url()}) {
    try {
      post_json(url, body, 500);
      FAIL("expected a transport error");
    } catch (const TransportError& e) {
      CHECK(e.endpoint() == url);
      CHECK(e.category() == ErrorCategory::kTransport);
    }
  }
  CHECK_THROWS_AS(post_json("ftp://example/x", body, 500), TransportError);
}

TEST_CASE("remote answer stage falls back to the oracle") {
  set_warnings_enabled(false);
  Catalog c = testing::sports_catalog();
  auto si = make_intent({"team"}, {"Yao Ming"}, "drafted");
  Question q{"q", "Which team drafted Yao Ming?", {"Houston Rockets"}};
  EvidenceList evidence{testing::piece("a", "Yao Ming drafted by Houston Rockets", {"Q6", "Q7"}, 1.0)};

  auto dead = std::make_shared<HttpGeneratorClient>(dead_url(), 500);
  RemoteAnswerStage with_fallback(dead, c, 32, true);
  CHECK(with_fallback.answer(si, q, evidence) == "Houston Rockets");
  RemoteAnswerStage strict(dead, c, 32, false);
  CHECK_THROWS_AS(strict.answer(si, q, evidence), TransportError);

  FakeServices services;
  auto live = std::make_shared<HttpGeneratorClient>(services.url("/generate"), 2000);
  RemoteAnswerStage remote(live, c, 16, false);
  CHECK(remote.answer(si, q, evidence) == "Houston Rockets");
  CHECK(services.last_prompt == "SI: team Yao Ming drafted Evidence: Yao Ming drafted by Houston Rockets");
  set_warnings_enabled(true);
}
