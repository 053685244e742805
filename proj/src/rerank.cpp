#include "quasar/rerank.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "quasar/error.hpp"
#include "quasar/http.hpp"
#include "quasar/text.hpp"

namespace quasar {

RerankSchedule::RerankSchedule(std::vector<RerankStage> stages, GraphCaps caps)
    : stages_(std::move(stages)), caps_(caps) {
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    if (stages_[i].output_k == 0 || stages_[i].output_k >= stages_[i].input_k) {
      throw ConfigError("rerank stage " + std::to_string(i) +
                        " must satisfy 0 < output_k < input_k");
    }
    if (i > 0 && stages_[i - 1].output_k != stages_[i].input_k) {
      throw ConfigError("rerank stage " + std::to_string(i) +
                        " does not chain with the previous stage");
    }
  }
}

RerankSchedule RerankSchedule::ending_at(std::size_t final_k, std::size_t pool_p,
                                         bool two_stage, GraphCaps caps) {
  constexpr std::size_t kMiddle = 100;
  if (final_k == 0) throw ConfigError("final evidence count must be positive");
  if (final_k >= pool_p) return RerankSchedule({}, caps);
  if (two_stage && final_k < kMiddle && kMiddle < pool_p) {
    return RerankSchedule({{pool_p, kMiddle}, {kMiddle, final_k}}, caps);
  }
  return RerankSchedule({{pool_p, final_k}}, caps);
}

namespace {

// Stable descending order of survivors by score, attaching the scores.
EvidenceList order_by(const EvidenceList& survivors, const std::vector<double>& scores,
                      std::size_t keep) {
  if (scores.size() != survivors.size()) {
    throw std::logic_error("scorer returned a wrong number of scores");
  }
  std::vector<std::size_t> order(survivors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (order.size() > keep) order.resize(keep);
  EvidenceList out;
  out.reserve(order.size());
  for (auto i : order) {
    out.push_back(survivors[i]);
    out.back().score = scores[i];
  }
  return out;
}

}  // namespace

EvidenceList run_schedule(const StructuredIntent& si, std::string_view question,
                          const EvidenceList& pool, const RerankSchedule& schedule,
                          const EvidenceScorer& scorer,
                          std::vector<EvidenceList>* stage_outputs) {
  const auto& stages = schedule.stages();
  if (stages.empty() || pool.empty()) return pool;

  EvidenceList survivors = pool;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    if (survivors.size() > stages[s].input_k) survivors.resize(stages[s].input_k);
    auto scores = scorer.score(si, question, survivors, s);
    survivors = order_by(survivors, scores, stages[s].output_k);
    if (stage_outputs != nullptr) stage_outputs->push_back(survivors);
  }
  auto final_scores = scorer.score(si, question, survivors, stages.size() - 1);
  return order_by(survivors, final_scores, survivors.size());
}

double jaccard_score(std::string_view query, std::string_view passage) {
  auto q = tokenize(query);
  auto p = tokenize(passage);
  std::unordered_set<std::string> a(q.begin(), q.end());
  std::unordered_set<std::string> b(p.begin(), p.end());
  if (a.empty() && b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& t : a) shared += b.count(t);
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

HttpCrossEncoderClient::HttpCrossEncoderClient(std::string url, int timeout_ms)
    : url_(std::move(url)), timeout_ms_(timeout_ms) {}

double HttpCrossEncoderClient::score(const std::string& query,
                                     const std::string& passage) const {
  Json reply = post_json(url_, Json{{"query", query}, {"passage", passage}}, timeout_ms_);
  auto it = reply.find("score");
  if (it == reply.end() || !it->is_number()) {
    throw TransportError(url_, "reply lacks numeric field 'score'");
  }
  return it->get<double>();
}

double ce_score(const StructuredIntent& si, const EvidencePiece& piece,
                const CrossEncoderClient* client, std::string_view question) {
  std::string query = si_concat(si, question);
  if (client != nullptr) return client->score(query, piece.text);
  return jaccard_score(query, piece.text);
}

CeScorer::CeScorer(std::vector<std::shared_ptr<const CrossEncoderClient>> stage_clients)
    : clients_(std::move(stage_clients)) {}

std::vector<double> CeScorer::score(const StructuredIntent& si, std::string_view question,
                                    const EvidenceList& survivors, std::size_t stage) const {
  const CrossEncoderClient* client = nullptr;
  if (!clients_.empty()) client = clients_[std::min(stage, clients_.size() - 1)].get();
  std::vector<double> out;
  out.reserve(survivors.size());
  for (const auto& piece : survivors) out.push_back(ce_score(si, piece, client, question));
  return out;
}

std::vector<double> PassthroughScorer::score(const StructuredIntent&, std::string_view,
                                             const EvidenceList& survivors,
                                             std::size_t) const {
  std::vector<double> out;
  out.reserve(survivors.size());
  for (const auto& piece : survivors) out.push_back(piece.score);
  return out;
}

GnnScorer::GnnScorer(std::vector<GnnModel<double>> stage_models, const Catalog& catalog,
                     GraphCaps caps, std::shared_ptr<const NodeEncoder> encoder)
    : models_(std::move(stage_models)),
      catalog_(&catalog),
      caps_(caps),
      encoder_(std::move(encoder)) {
  if (models_.empty()) throw ConfigError("GNN scorer needs at least one model");
  for (const auto& m : models_) m.check_shapes();
  if (!encoder_) encoder_ = std::make_shared<HashedBowEncoder>(models_.front().dim);
  for (const auto& m : models_) {
    if (m.dim != encoder_->dim()) throw ConfigError("GNN dim differs from encoder dim");
  }
}

std::vector<double> GnnScorer::score(const StructuredIntent& si, std::string_view question,
                                     const EvidenceList& survivors, std::size_t stage) const {
  std::vector<double> out(survivors.size(), 0.0);
  if (survivors.empty()) return out;
  const auto& model = models_[std::min(stage, models_.size() - 1)];
  BipartiteGraph graph = build_graph(survivors, caps_);
  auto numeric = GnnGraph<double>::from(graph);
  Eigen::MatrixXd enc = encode_nodes(graph, si, question, survivors, *catalog_, *encoder_);
  auto result = gnn_forward(model, numeric, enc);
  for (std::size_t e = 0; e < graph.evidence_pool_index.size(); ++e) {
    out[graph.evidence_pool_index[e]] = result.evidence_scores(static_cast<Eigen::Index>(e));
  }
  return out;
}

WeakLabels weak_label(const EvidenceList& pool, const std::vector<std::string>& gold_answers,
                      const Catalog& catalog) {
  std::unordered_set<std::string> answers;
  for (const auto& gold : gold_answers) {
    for (auto& id : catalog.match_answer(gold)) answers.insert(std::move(id));
  }
  WeakLabels labels;
  for (const auto& piece : pool) {
    bool relevant = false;
    for (const auto& id : piece.entity_ids) {
      bool is_answer = answers.count(id) > 0;
      labels.entity_answer[id] = is_answer;
      relevant = relevant || is_answer;
    }
    labels.evidence_relevant[piece.id] = relevant;
  }
  return labels;
}

GnnLabels to_gnn_labels(const BipartiteGraph& graph, const WeakLabels& labels) {
  GnnLabels out;
  for (const auto& id : graph.evidence_nodes) {
    auto it = labels.evidence_relevant.find(id);
    out.evidence_relevant.push_back(it != labels.evidence_relevant.end() && it->second);
  }
  for (const auto& id : graph.entity_nodes) {
    auto it = labels.entity_answer.find(id);
    out.entity_answer.push_back(it != labels.entity_answer.end() && it->second);
  }
  return out;
}

TrainingExample make_training_example(const StructuredIntent& si, std::string_view question,
                                      const EvidenceList& pool,
                                      const std::vector<std::string>& gold_answers,
                                      const Catalog& catalog, const GraphCaps& caps,
                                      const NodeEncoder& encoder) {
  BipartiteGraph graph = build_graph(pool, caps);
  TrainingExample ex;
  ex.graph = GnnGraph<double>::from(graph);
  ex.encodings = encode_nodes(graph, si, question, pool, catalog, encoder);
  ex.labels = to_gnn_labels(graph, weak_label(pool, gold_answers, catalog));
  return ex;
}

}  // namespace quasar
