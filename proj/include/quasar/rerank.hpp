#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quasar/core.hpp"
#include "quasar/encoding.hpp"
#include "quasar/gnn.hpp"
#include "quasar/graph.hpp"
#include "quasar/trainer.hpp"

namespace quasar {

struct RerankStage {
  std::size_t input_k = 0;
  std::size_t output_k = 0;

  bool operator==(const RerankStage&) const = default;
};

// Iterative pruning plan. Stages must shrink (output_k < input_k) and chain
// (output_k of stage i equals input_k of stage i + 1).
class RerankSchedule {
 public:
  RerankSchedule() : RerankSchedule({{1000, 100}, {100, 30}}) {}
  explicit RerankSchedule(std::vector<RerankStage> stages, GraphCaps caps = {});

  // Single-stage or two-stage schedule ending at final_k.
  static RerankSchedule ending_at(std::size_t final_k, std::size_t pool_p,
                                  bool two_stage, GraphCaps caps = {});

  const std::vector<RerankStage>& stages() const { return stages_; }
  const GraphCaps& caps() const { return caps_; }

 private:
  std::vector<RerankStage> stages_;
  GraphCaps caps_;
};

// Scores survivors of one pruning stage; higher is better.
class EvidenceScorer {
 public:
  virtual ~EvidenceScorer() = default;
  virtual std::vector<double> score(const StructuredIntent& si, std::string_view question,
                                    const EvidenceList& survivors, std::size_t stage) const = 0;
};

// Prunes pool stage by stage. Each stage cuts survivors to input_k by prior
// rank, scores them, and keeps the output_k best (ties by prior rank). The
// final survivors are scored once more with the last stage's scorer and
// returned in that order with scores attached. An empty schedule returns the
// pool unchanged; a pool smaller than output_k is never padded.
EvidenceList run_schedule(const StructuredIntent& si, std::string_view question,
                          const EvidenceList& pool, const RerankSchedule& schedule,
                          const EvidenceScorer& scorer,
                          std::vector<EvidenceList>* stage_outputs = nullptr);

// Token-set Jaccard similarity; 0 when both sides are empty.
double jaccard_score(std::string_view query, std::string_view passage);

// Remote cross-encoder. Implementations must tolerate concurrent calls.
class CrossEncoderClient {
 public:
  virtual ~CrossEncoderClient() = default;
  // Throws TransportError on failure.
  virtual double score(const std::string& query, const std::string& passage) const = 0;
};

// POST {"query", "passage"} -> {"score"}.
class HttpCrossEncoderClient : public CrossEncoderClient {
 public:
  HttpCrossEncoderClient(std::string url, int timeout_ms);
  double score(const std::string& query, const std::string& passage) const override;
  const std::string& url() const { return url_; }

 private:
  std::string url_;
  int timeout_ms_;
};

// Remote score when a client is given, embedded Jaccard fallback otherwise.
double ce_score(const StructuredIntent& si, const EvidencePiece& piece,
                const CrossEncoderClient* client, std::string_view question = {});

// Cross-encoder scoring with one optional client per stage (the last client
// serves later stages). Stages without a client use the Jaccard fallback.
class CeScorer : public EvidenceScorer {
 public:
  CeScorer() = default;
  explicit CeScorer(std::vector<std::shared_ptr<const CrossEncoderClient>> stage_clients);
  std::vector<double> score(const StructuredIntent& si, std::string_view question,
                            const EvidenceList& survivors, std::size_t stage) const override;

 private:
  std::vector<std::shared_ptr<const CrossEncoderClient>> clients_;
};

// Keeps the incoming retrieval scores: pruning degenerates to BM25 top-k.
class PassthroughScorer : public EvidenceScorer {
 public:
  std::vector<double> score(const StructuredIntent& si, std::string_view question,
                            const EvidenceList& survivors, std::size_t stage) const override;
};

// GNN scoring: builds the bipartite graph over the survivors, encodes nodes
// and runs the stage's model. Evidence dropped by the graph caps scores 0.
class GnnScorer : public EvidenceScorer {
 public:
  GnnScorer(std::vector<GnnModel<double>> stage_models, const Catalog& catalog,
            GraphCaps caps = {}, std::shared_ptr<const NodeEncoder> encoder = nullptr);
  std::vector<double> score(const StructuredIntent& si, std::string_view question,
                            const EvidenceList& survivors, std::size_t stage) const override;

 private:
  std::vector<GnnModel<double>> models_;
  const Catalog* catalog_;
  GraphCaps caps_;
  std::shared_ptr<const NodeEncoder> encoder_;
};

struct WeakLabels {
  std::map<std::string, bool> evidence_relevant;
  std::map<std::string, bool> entity_answer;
};

// An entity is an answer iff one of its names normalizes to a normalized gold
// answer; evidence is relevant iff it mentions an answer entity. Covers the
// entities mentioned in the pool.
WeakLabels weak_label(const EvidenceList& pool, const std::vector<std::string>& gold_answers,
                      const Catalog& catalog);

GnnLabels to_gnn_labels(const BipartiteGraph& graph, const WeakLabels& labels);

// Graph, encodings and weak labels for one training question.
TrainingExample make_training_example(const StructuredIntent& si, std::string_view question,
                                      const EvidenceList& pool,
                                      const std::vector<std::string>& gold_answers,
                                      const Catalog& catalog, const GraphCaps& caps,
                                      const NodeEncoder& encoder);

}  // namespace quasar
