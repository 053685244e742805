#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "quasar/graph.hpp"

namespace quasar {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Message-passing scorer over the evidence/entity graph.
//
// Each layer maps node states h to tanh(W_self h + W_msg mean(neighbors h));
// isolated nodes receive a zero message. Evidence nodes are scored with
// logistic(w_evidence . h), entity nodes with a softmax of w_entity . h over
// all entity nodes.
template <typename Scalar>
struct GnnModel {
  int layer_count = 3;
  int dim = 64;
  std::uint64_t rng_seed = 0;
  std::vector<MatrixX<Scalar>> w_self;
  std::vector<MatrixX<Scalar>> w_msg;
  VectorX<Scalar> w_evidence;
  VectorX<Scalar> w_entity;

  static GnnModel zeros(int layer_count, int dim) {
    if (layer_count < 0 || dim < 1) throw std::invalid_argument("invalid GNN shape");
    GnnModel m;
    m.layer_count = layer_count;
    m.dim = dim;
    for (int l = 0; l < layer_count; ++l) {
      m.w_self.push_back(MatrixX<Scalar>::Zero(dim, dim));
      m.w_msg.push_back(MatrixX<Scalar>::Zero(dim, dim));
    }
    m.w_evidence = VectorX<Scalar>::Zero(dim);
    m.w_entity = VectorX<Scalar>::Zero(dim);
    return m;
  }

  // Glorot-uniform weights drawn from mt19937_64(seed); bit-reproducible.
  static GnnModel initialize(int layer_count, int dim, std::uint64_t seed) {
    GnnModel m = zeros(layer_count, dim);
    m.rng_seed = seed;
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double limit) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return static_cast<Scalar>((2.0 * u - 1.0) * limit);
    };
    const double square = std::sqrt(6.0 / (2.0 * dim));
    const double head = std::sqrt(6.0 / (dim + 1.0));
    for (int l = 0; l < layer_count; ++l) {
      for (auto* w : {&m.w_self[l], &m.w_msg[l]}) {
        for (Eigen::Index r = 0; r < dim; ++r) {
          for (Eigen::Index c = 0; c < dim; ++c) (*w)(r, c) = uniform(square);
        }
      }
    }
    for (Eigen::Index i = 0; i < dim; ++i) m.w_evidence(i) = uniform(head);
    for (Eigen::Index i = 0; i < dim; ++i) m.w_entity(i) = uniform(head);
    return m;
  }

  void check_shapes() const {
    bool ok = layer_count >= 0 && dim >= 1 &&
              w_self.size() == static_cast<std::size_t>(layer_count) &&
              w_msg.size() == static_cast<std::size_t>(layer_count) &&
              w_evidence.size() == dim && w_entity.size() == dim;
    for (int l = 0; ok && l < layer_count; ++l) {
      ok = w_self[l].rows() == dim && w_self[l].cols() == dim && w_msg[l].rows() == dim &&
           w_msg[l].cols() == dim;
    }
    if (!ok) throw std::invalid_argument("GNN weight shapes inconsistent with dim");
  }

  std::size_t parameter_count() const {
    return static_cast<std::size_t>(layer_count) * 2 * dim * dim + 2 * static_cast<std::size_t>(dim);
  }

  // Row-major layer matrices (W_self then W_msg per layer), then both heads.
  VectorX<Scalar> flatten() const {
    VectorX<Scalar> out(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index k = 0;
    for (int l = 0; l < layer_count; ++l) {
      for (const auto* w : {&w_self[l], &w_msg[l]}) {
        for (Eigen::Index r = 0; r < dim; ++r) {
          for (Eigen::Index c = 0; c < dim; ++c) out(k++) = (*w)(r, c);
        }
      }
    }
    out.segment(k, dim) = w_evidence;
    k += dim;
    out.segment(k, dim) = w_entity;
    return out;
  }

  void assign(const VectorX<Scalar>& flat) {
    if (flat.size() != static_cast<Eigen::Index>(parameter_count())) {
      throw std::invalid_argument("parameter vector has wrong length");
    }
    Eigen::Index k = 0;
    for (int l = 0; l < layer_count; ++l) {
      for (auto* w : {&w_self[l], &w_msg[l]}) {
        for (Eigen::Index r = 0; r < dim; ++r) {
          for (Eigen::Index c = 0; c < dim; ++c) (*w)(r, c) = flat(k++);
        }
      }
    }
    w_evidence = flat.segment(k, dim);
    k += dim;
    w_entity = flat.segment(k, dim);
  }

  template <typename Other>
  GnnModel<Other> cast() const {
    GnnModel<Other> m;
    m.layer_count = layer_count;
    m.dim = dim;
    m.rng_seed = rng_seed;
    for (int l = 0; l < layer_count; ++l) {
      m.w_self.push_back(w_self[l].template cast<Other>());
      m.w_msg.push_back(w_msg[l].template cast<Other>());
    }
    m.w_evidence = w_evidence.template cast<Other>();
    m.w_entity = w_entity.template cast<Other>();
    return m;
  }

  bool operator==(const GnnModel& o) const {
    if (layer_count != o.layer_count || dim != o.dim || rng_seed != o.rng_seed) return false;
    for (int l = 0; l < layer_count; ++l) {
      if (w_self[l] != o.w_self[l] || w_msg[l] != o.w_msg[l]) return false;
    }
    return w_evidence == o.w_evidence && w_entity == o.w_entity;
  }
};

// Numeric form of a BipartiteGraph. Node rows: evidence [0, E), entities
// [E, E + N). mean_adjacency row i holds 1/deg(i) at each neighbor of i.
template <typename Scalar>
struct GnnGraph {
  Eigen::Index evidence_count = 0;
  Eigen::Index entity_count = 0;
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> mean_adjacency;

  Eigen::Index node_count() const { return evidence_count + entity_count; }

  static GnnGraph from_edges(Eigen::Index evidence_count, Eigen::Index entity_count,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    GnnGraph g;
    g.evidence_count = evidence_count;
    g.entity_count = entity_count;
    const Eigen::Index n = evidence_count + entity_count;
    std::vector<Scalar> degree(static_cast<std::size_t>(n), Scalar(0));
    for (const auto& [e, v] : edges) {
      if (static_cast<Eigen::Index>(e) >= evidence_count ||
          static_cast<Eigen::Index>(v) >= entity_count) {
        throw std::out_of_range("edge endpoint outside the graph");
      }
      degree[e] += Scalar(1);
      degree[evidence_count + v] += Scalar(1);
    }
    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(2 * edges.size());
    for (const auto& [e, v] : edges) {
      auto a = static_cast<Eigen::Index>(e);
      auto b = evidence_count + static_cast<Eigen::Index>(v);
      triplets.emplace_back(a, b, Scalar(1) / degree[a]);
      triplets.emplace_back(b, a, Scalar(1) / degree[b]);
    }
    g.mean_adjacency.resize(n, n);
    g.mean_adjacency.setFromTriplets(triplets.begin(), triplets.end());
    return g;
  }

  static GnnGraph from(const BipartiteGraph& graph) {
    return from_edges(static_cast<Eigen::Index>(graph.evidence_nodes.size()),
                      static_cast<Eigen::Index>(graph.entity_nodes.size()), graph.edges);
  }
};

// Weak supervision targets in graph node order (1 = relevant / answer).
struct GnnLabels {
  std::vector<std::uint8_t> evidence_relevant;
  std::vector<std::uint8_t> entity_answer;
};

template <typename Scalar>
struct GnnOutput {
  VectorX<Scalar> evidence_logits;
  VectorX<Scalar> entity_logits;
  VectorX<Scalar> evidence_scores;  // in (0, 1)
  VectorX<Scalar> entity_scores;    // softmax, sums to 1
  // hidden[l] is the node state entering layer l; hidden.back() is final.
  std::vector<MatrixX<Scalar>> hidden;
  // messages[l] = mean_adjacency * hidden[l].
  std::vector<MatrixX<Scalar>> messages;
};

template <typename Scalar>
GnnOutput<Scalar> gnn_forward(const GnnModel<Scalar>& model, const GnnGraph<Scalar>& graph,
                              const MatrixX<Scalar>& encodings) {
  model.check_shapes();
  if (encodings.rows() != graph.node_count() || encodings.cols() != model.dim) {
    throw std::invalid_argument("encodings are " + std::to_string(encodings.rows()) + "x" +
                                std::to_string(encodings.cols()) + ", expected " +
                                std::to_string(graph.node_count()) + "x" +
                                std::to_string(model.dim));
  }
  GnnOutput<Scalar> out;
  out.hidden.reserve(static_cast<std::size_t>(model.layer_count) + 1);
  out.hidden.push_back(encodings);
  for (int l = 0; l < model.layer_count; ++l) {
    const MatrixX<Scalar>& h = out.hidden.back();
    MatrixX<Scalar> m = graph.mean_adjacency * h;
    MatrixX<Scalar> z = h * model.w_self[l].transpose() + m * model.w_msg[l].transpose();
    out.messages.push_back(std::move(m));
    out.hidden.push_back(z.array().tanh().matrix());
  }
  const MatrixX<Scalar>& h = out.hidden.back();
  out.evidence_logits = h.topRows(graph.evidence_count) * model.w_evidence;
  out.entity_logits = h.bottomRows(graph.entity_count) * model.w_entity;
  out.evidence_scores =
      (Scalar(1) / (Scalar(1) + (-out.evidence_logits.array()).exp())).matrix();
  if (graph.entity_count > 0) {
    Scalar max_logit = out.entity_logits.maxCoeff();
    VectorX<Scalar> e = (out.entity_logits.array() - max_logit).exp().matrix();
    out.entity_scores = e / e.sum();
  } else {
    out.entity_scores.resize(0);
  }
  return out;
}

namespace detail {

template <typename Scalar>
Scalar log_sum_exp(const VectorX<Scalar>& v) {
  Scalar m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

template <typename Scalar>
void check_labels(const GnnGraph<Scalar>& graph, const GnnLabels& labels) {
  if (static_cast<Eigen::Index>(labels.evidence_relevant.size()) != graph.evidence_count ||
      static_cast<Eigen::Index>(labels.entity_answer.size()) != graph.entity_count) {
    throw std::invalid_argument("label vectors do not match the graph");
  }
}

}  // namespace detail

// Multi-task loss: mean binary cross-entropy over evidence nodes plus
// -log(sum of softmax mass on answer entities). The entity term is dropped
// when the graph has no answer entity.
template <typename Scalar>
Scalar gnn_loss(const GnnOutput<Scalar>& out, const GnnLabels& labels) {
  Scalar loss(0);
  const Eigen::Index ne = out.evidence_logits.size();
  for (Eigen::Index i = 0; i < ne; ++i) {
    Scalar s = out.evidence_logits(i);
    Scalar y = labels.evidence_relevant[i] ? Scalar(1) : Scalar(0);
    loss += std::max(s, Scalar(0)) - s * y + std::log1p(std::exp(-std::abs(s)));
  }
  if (ne > 0) loss /= static_cast<Scalar>(ne);

  std::vector<Scalar> answer_logits;
  for (Eigen::Index j = 0; j < out.entity_logits.size(); ++j) {
    if (labels.entity_answer[j]) answer_logits.push_back(out.entity_logits(j));
  }
  if (!answer_logits.empty()) {
    VectorX<Scalar> a = Eigen::Map<VectorX<Scalar>>(answer_logits.data(),
                                                    static_cast<Eigen::Index>(answer_logits.size()));
    loss += detail::log_sum_exp(out.entity_logits) - detail::log_sum_exp(a);
  }
  return loss;
}

template <typename Scalar>
Scalar gnn_loss(const GnnModel<Scalar>& model, const GnnGraph<Scalar>& graph,
                const MatrixX<Scalar>& encodings, const GnnLabels& labels) {
  detail::check_labels(graph, labels);
  return gnn_loss(gnn_forward(model, graph, encodings), labels);
}

// Loss and its analytic gradient by backpropagation. gradient receives the
// same shapes as model.
template <typename Scalar>
Scalar gnn_loss_and_gradient(const GnnModel<Scalar>& model, const GnnGraph<Scalar>& graph,
                             const MatrixX<Scalar>& encodings, const GnnLabels& labels,
                             GnnModel<Scalar>& gradient) {
  detail::check_labels(graph, labels);
  GnnOutput<Scalar> out = gnn_forward(model, graph, encodings);
  const Scalar loss = gnn_loss(out, labels);
  const Eigen::Index ne = graph.evidence_count;
  const Eigen::Index nn = graph.entity_count;

  VectorX<Scalar> d_evidence(ne);
  for (Eigen::Index i = 0; i < ne; ++i) {
    Scalar y = labels.evidence_relevant[i] ? Scalar(1) : Scalar(0);
    d_evidence(i) = (out.evidence_scores(i) - y) / static_cast<Scalar>(ne);
  }
  VectorX<Scalar> d_entity = VectorX<Scalar>::Zero(nn);
  bool has_answer = false;
  for (Eigen::Index j = 0; j < nn; ++j) has_answer = has_answer || labels.entity_answer[j];
  if (has_answer) {
    Scalar answer_mass(0);
    for (Eigen::Index j = 0; j < nn; ++j) {
      if (labels.entity_answer[j]) answer_mass += out.entity_scores(j);
    }
    for (Eigen::Index j = 0; j < nn; ++j) {
      d_entity(j) = out.entity_scores(j);
      if (labels.entity_answer[j]) d_entity(j) -= out.entity_scores(j) / answer_mass;
    }
  }

  gradient = GnnModel<Scalar>::zeros(model.layer_count, model.dim);
  gradient.rng_seed = model.rng_seed;
  const MatrixX<Scalar>& h_final = out.hidden.back();
  gradient.w_evidence = h_final.topRows(ne).transpose() * d_evidence;
  gradient.w_entity = h_final.bottomRows(nn).transpose() * d_entity;

  MatrixX<Scalar> g(graph.node_count(), model.dim);
  g.topRows(ne) = d_evidence * model.w_evidence.transpose();
  g.bottomRows(nn) = d_entity * model.w_entity.transpose();

  for (int l = model.layer_count - 1; l >= 0; --l) {
    const MatrixX<Scalar>& h_next = out.hidden[l + 1];
    MatrixX<Scalar> dz = (g.array() * (Scalar(1) - h_next.array().square())).matrix();
    gradient.w_self[l] = dz.transpose() * out.hidden[l];
    gradient.w_msg[l] = dz.transpose() * out.messages[l];
    MatrixX<Scalar> through_msg = dz * model.w_msg[l];
    g = dz * model.w_self[l] + MatrixX<Scalar>(graph.mean_adjacency.transpose() * through_msg);
  }
  return loss;
}

}  // namespace quasar
