#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "quasar/core.hpp"
#include "quasar/graph.hpp"

namespace quasar {

std::uint64_t fnv1a64(std::string_view text);

// Signed feature hashing: token t adds sign(t) to bucket fnv1a64(t) % dim,
// where sign is -1 when the top hash bit is set. The result is L2-normalized;
// an all-zero bag stays zero.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hashed_bag_of_words(
    std::span<const std::string> tokens, int dim) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(dim);
  for (const auto& token : tokens) {
    std::uint64_t h = fnv1a64(token);
    auto bucket = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(dim));
    v(bucket) += (h >> 63) != 0 ? Scalar(-1) : Scalar(1);
  }
  Scalar norm = v.norm();
  if (norm > Scalar(0)) v /= norm;
  return v;
}

// Source of initial node encodings. Swappable for a learned encoder.
class NodeEncoder {
 public:
  virtual ~NodeEncoder() = default;
  virtual int dim() const = 0;
  // One row per node text, each encoding the node text together with the
  // concatenated intent.
  virtual Eigen::MatrixXd encode(const std::vector<std::string>& node_texts,
                                 std::string_view intent_text) const = 0;
};

class HashedBowEncoder : public NodeEncoder {
 public:
  explicit HashedBowEncoder(int dim = 64);
  int dim() const override { return dim_; }
  Eigen::MatrixXd encode(const std::vector<std::string>& node_texts,
                         std::string_view intent_text) const override;

 private:
  int dim_;
};

// Rows follow graph node order: evidence nodes (verbalized text) then entity
// nodes (catalog label, or the id when the entity is unknown).
Eigen::MatrixXd encode_nodes(const BipartiteGraph& graph, const StructuredIntent& si,
                             std::string_view question, const EvidenceList& pool,
                             const Catalog& catalog, const NodeEncoder& encoder);

}  // namespace quasar
