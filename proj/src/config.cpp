#include "quasar/config.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>

#include "quasar/error.hpp"
#include "quasar/http.hpp"

namespace quasar {

namespace {

void check_keys(const Json& j, std::string_view section,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown config key " + std::string(section) + "." + key);
    }
  }
}

template <class T>
void read(const Json& j, const char* key, T& out, std::string_view section) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError("bad value for " + std::string(section) + "." + key + ": " + e.what());
  }
}

void read_caps(const Json& j, const char* key, GraphCaps& caps) {
  auto it = j.find(key);
  if (it == j.end()) return;
  check_keys(*it, key, {"evidence", "entity"});
  read(*it, "evidence", caps.evidence_cap, key);
  read(*it, "entity", caps.entity_cap, key);
}

Json caps_json(const GraphCaps& caps) {
  return Json{{"evidence", caps.evidence_cap}, {"entity", caps.entity_cap}};
}

}  // namespace

Config Config::from_json(const Json& j) {
  Config c;
  check_keys(j, "config", {"retrieval", "qu", "rerank", "answer", "eval", "seed"});
  read(j, "seed", c.seed, "config");
  if (auto it = j.find("retrieval"); it != j.end()) {
    check_keys(*it, "retrieval", {"anchor_k", "pool_p", "bm25_k1", "bm25_b"});
    read(*it, "anchor_k", c.retrieval.anchor_k, "retrieval");
    read(*it, "pool_p", c.retrieval.pool_p, "retrieval");
    read(*it, "bm25_k1", c.retrieval.bm25_k1, "retrieval");
    read(*it, "bm25_b", c.retrieval.bm25_b, "retrieval");
  }
  if (auto it = j.find("qu"); it != j.end()) {
    check_keys(*it, "qu", {"mode", "si_model_url", "timeout_ms"});
    read(*it, "mode", c.qu.mode, "qu");
    read(*it, "si_model_url", c.qu.si_model_url, "qu");
    read(*it, "timeout_ms", c.qu.timeout_ms, "qu");
  }
  if (auto it = j.find("rerank"); it != j.end()) {
    const Json& r = *it;
    check_keys(r, "rerank",
               {"mode", "stages", "inference_caps", "training_caps", "layers", "dim", "epochs",
                "learning_rate", "checkpoint", "stage1_scorer_url", "stage2_scorer_url",
                "timeout_ms"});
    read(r, "mode", c.rerank.mode, "rerank");
    if (auto s = r.find("stages"); s != r.end()) {
      if (!s->is_array()) throw ConfigError("rerank.stages must be an array of [in, out]");
      c.rerank.stages.clear();
      for (const auto& stage : *s) {
        auto positive = [](const Json& v) {
          return v.is_number_integer() && v.get<std::int64_t>() > 0;
        };
        if (!stage.is_array() || stage.size() != 2 || !positive(stage[0]) ||
            !positive(stage[1])) {
          throw ConfigError("rerank.stages entries must be [input_k, output_k]");
        }
        c.rerank.stages.push_back({stage[0].get<std::size_t>(), stage[1].get<std::size_t>()});
      }
    }
    read_caps(r, "inference_caps", c.rerank.inference_caps);
    read_caps(r, "training_caps", c.rerank.training_caps);
    read(r, "layers", c.rerank.layers, "rerank");
    read(r, "dim", c.rerank.dim, "rerank");
    read(r, "epochs", c.rerank.epochs, "rerank");
    read(r, "learning_rate", c.rerank.learning_rate, "rerank");
    read(r, "checkpoint", c.rerank.checkpoint, "rerank");
    read(r, "stage1_scorer_url", c.rerank.stage1_scorer_url, "rerank");
    read(r, "stage2_scorer_url", c.rerank.stage2_scorer_url, "rerank");
    read(r, "timeout_ms", c.rerank.timeout_ms, "rerank");
  }
  if (auto it = j.find("answer"); it != j.end()) {
    check_keys(*it, "answer",
               {"generator", "generator_url", "timeout_ms", "max_answer_tokens",
                "fallback_to_oracle"});
    read(*it, "generator", c.answer.generator, "answer");
    read(*it, "generator_url", c.answer.generator_url, "answer");
    read(*it, "timeout_ms", c.answer.timeout_ms, "answer");
    read(*it, "max_answer_tokens", c.answer.max_answer_tokens, "answer");
    read(*it, "fallback_to_oracle", c.answer.fallback_to_oracle, "answer");
  }
  if (auto it = j.find("eval"); it != j.end()) {
    check_keys(*it, "eval", {"ks", "jobs"});
    read(*it, "ks", c.eval.ks, "eval");
    read(*it, "jobs", c.eval.jobs, "eval");
  }
  c.validate();
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

Json Config::to_json() const {
  Json stages = Json::array();
  for (const auto& s : rerank.stages) stages.push_back(Json::array({s.input_k, s.output_k}));
  return Json{
      {"seed", seed},
      {"retrieval",
       {{"anchor_k", retrieval.anchor_k},
        {"pool_p", retrieval.pool_p},
        {"bm25_k1", retrieval.bm25_k1},
        {"bm25_b", retrieval.bm25_b}}},
      {"qu", {{"mode", qu.mode}, {"si_model_url", qu.si_model_url}, {"timeout_ms", qu.timeout_ms}}},
      {"rerank",
       {{"mode", rerank.mode},
        {"stages", stages},
        {"inference_caps", caps_json(rerank.inference_caps)},
        {"training_caps", caps_json(rerank.training_caps)},
        {"layers", rerank.layers},
        {"dim", rerank.dim},
        {"epochs", rerank.epochs},
        {"learning_rate", rerank.learning_rate},
        {"checkpoint", rerank.checkpoint},
        {"stage1_scorer_url", rerank.stage1_scorer_url},
        {"stage2_scorer_url", rerank.stage2_scorer_url},
        {"timeout_ms", rerank.timeout_ms}}},
      {"answer",
       {{"generator", answer.generator},
        {"generator_url", answer.generator_url},
        {"timeout_ms", answer.timeout_ms},
        {"max_answer_tokens", answer.max_answer_tokens},
        {"fallback_to_oracle", answer.fallback_to_oracle}}},
      {"eval", {{"ks", eval.ks}, {"jobs", eval.jobs}}},
  };
}

void Config::apply_environment() {
  if (auto v = env_or_empty("QUASAR_GENERATOR_URL"); !v.empty()) answer.generator_url = v;
  if (auto v = env_or_empty("QUASAR_SCORER_URL_1"); !v.empty()) rerank.stage1_scorer_url = v;
  if (auto v = env_or_empty("QUASAR_SCORER_URL_2"); !v.empty()) rerank.stage2_scorer_url = v;
}

void Config::set_pool_p(std::size_t pool_p) {
  if (pool_p == 0) throw ConfigError("pool_p must be positive");
  retrieval.pool_p = static_cast<int>(pool_p);
  std::size_t final_k = rerank.stages.empty() ? pool_p : rerank.stages.back().output_k;
  set_final_k(final_k);
}

void Config::set_final_k(std::size_t final_k) {
  auto pool_p = static_cast<std::size_t>(retrieval.pool_p);
  bool two_stage = rerank.stages.size() > 1;
  rerank.stages = RerankSchedule::ending_at(final_k, pool_p, two_stage).stages();
}

RerankSchedule Config::schedule() const {
  return RerankSchedule(rerank.stages, rerank.inference_caps);
}

void Config::validate() const {
  retrieval.validate();
  if (qu.mode != "rules" && qu.mode != "model") {
    throw ConfigError("qu.mode must be rules or model");
  }
  if (rerank.mode != "gnn" && rerank.mode != "ce" && rerank.mode != "bm25") {
    throw ConfigError("rerank.mode must be gnn, ce or bm25");
  }
  if (answer.generator != "oracle" && answer.generator != "remote") {
    throw ConfigError("answer.generator must be oracle or remote");
  }
  RerankSchedule check(rerank.stages, rerank.inference_caps);
  if (!rerank.stages.empty() &&
      rerank.stages.front().input_k != static_cast<std::size_t>(retrieval.pool_p)) {
    throw ConfigError("first rerank stage must take retrieval.pool_p pieces");
  }
  if (rerank.layers < 0 || rerank.dim <= 0) {
    throw ConfigError("rerank.layers must be >= 0 and rerank.dim > 0");
  }
  if (rerank.epochs < 0 || !(rerank.learning_rate > 0.0)) {
    throw ConfigError("rerank.epochs must be >= 0 and rerank.learning_rate > 0");
  }
  if (answer.max_answer_tokens <= 0) throw ConfigError("answer.max_answer_tokens must be > 0");
  if (eval.jobs <= 0) throw ConfigError("eval.jobs must be > 0");
  if (eval.ks.empty() ||
      std::any_of(eval.ks.begin(), eval.ks.end(), [](std::size_t k) { return k == 0; })) {
    throw ConfigError("eval.ks must be non-empty and positive");
  }
  if (qu.timeout_ms <= 0 || rerank.timeout_ms <= 0 || answer.timeout_ms <= 0) {
    throw ConfigError("timeouts must be positive");
  }
}

}  // namespace quasar
