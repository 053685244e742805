#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "quasar/gnn.hpp"

namespace quasar {

struct TrainingExample {
  GnnGraph<double> graph;
  Eigen::MatrixXd encodings;
  GnnLabels labels;
};

struct TrainOptions {
  int epochs = 5;
  double learning_rate = 0.01;
  // Cutoff of the dev metric used for snapshot selection.
  std::size_t dev_k = 30;
};

struct TrainResult {
  GnnModel<double> model;
  // train_loss[0] is the initial mean loss, train_loss[e] the mean loss after
  // epoch e.
  std::vector<double> train_loss;
  // dev_metric[e - 1] is the dev answer presence after epoch e.
  std::vector<double> dev_metric;
  // 1-based epoch of the returned snapshot; 0 when no epoch ran.
  int best_epoch = 0;
};

double mean_loss(const GnnModel<double>& model, const std::vector<TrainingExample>& data);

// Fraction of examples with a relevant evidence node among the top k evidence
// scores (ties broken by node order).
double evidence_presence_at_k(const GnnModel<double>& model,
                              const std::vector<TrainingExample>& data, std::size_t k);

// Per-example gradient descent in dataset order with a fixed learning rate.
// After every epoch the dev metric is computed and the best snapshot (earliest
// on ties) is returned; without dev data the last epoch wins.
TrainResult gnn_train(const GnnModel<double>& initial,
                      const std::vector<TrainingExample>& train,
                      const std::vector<TrainingExample>& dev, const TrainOptions& options);

// Binary checkpoint: "QSRGNN01" magic, u32 format version, u32 model count,
// then per model u32 layers, u32 dim, u64 seed and little-endian doubles for
// W_self/W_msg per layer (row-major) followed by both heads.
inline constexpr std::uint32_t kCheckpointVersion = 1;
void save_checkpoint(std::ostream& out, const std::vector<GnnModel<double>>& models);
void save_checkpoint(const std::filesystem::path& path,
                     const std::vector<GnnModel<double>>& models);
std::vector<GnnModel<double>> load_checkpoint(std::istream& in);
std::vector<GnnModel<double>> load_checkpoint(const std::filesystem::path& path);

}  // namespace quasar
