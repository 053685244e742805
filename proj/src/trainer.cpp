#include "quasar/trainer.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>

#include "quasar/error.hpp"
#include "quasar/http.hpp"

namespace quasar {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

double mean_loss(const GnnModel<double>& model, const std::vector<TrainingExample>& data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : data) total += gnn_loss(model, ex.graph, ex.encodings, ex.labels);
  return total / static_cast<double>(data.size());
}

double evidence_presence_at_k(const GnnModel<double>& model,
                              const std::vector<TrainingExample>& data, std::size_t k) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& ex : data) {
    auto out = gnn_forward(model, ex.graph, ex.encodings);
    std::vector<std::size_t> order(static_cast<std::size_t>(ex.graph.evidence_count));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return out.evidence_scores(static_cast<Eigen::Index>(a)) >
             out.evidence_scores(static_cast<Eigen::Index>(b));
    });
    std::size_t n = std::min(k, order.size());
    for (std::size_t r = 0; r < n; ++r) {
      if (ex.labels.evidence_relevant[order[r]]) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainResult gnn_train(const GnnModel<double>& initial,
                      const std::vector<TrainingExample>& train,
                      const std::vector<TrainingExample>& dev, const TrainOptions& options) {
  initial.check_shapes();
  bool any_positive = false;
  for (const auto& ex : train) {
    for (auto y : ex.labels.evidence_relevant) any_positive = any_positive || y != 0;
  }
  if (!train.empty() && !any_positive) {
    log_warning("training data has no relevant evidence; all-negative targets");
  }

  TrainResult result;
  result.model = initial;
  result.train_loss.push_back(mean_loss(initial, train));

  GnnModel<double> current = initial;
  GnnModel<double> gradient;
  double best_metric = -1.0;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    for (const auto& ex : train) {
      gnn_loss_and_gradient(current, ex.graph, ex.encodings, ex.labels, gradient);
      for (int l = 0; l < current.layer_count; ++l) {
        current.w_self[l] -= options.learning_rate * gradient.w_self[l];
        current.w_msg[l] -= options.learning_rate * gradient.w_msg[l];
      }
      current.w_evidence -= options.learning_rate * gradient.w_evidence;
      current.w_entity -= options.learning_rate * gradient.w_entity;
    }
    result.train_loss.push_back(mean_loss(current, train));
    double metric = dev.empty() ? 0.0 : evidence_presence_at_k(current, dev, options.dev_k);
    result.dev_metric.push_back(metric);
    if (dev.empty() || metric > best_metric) {
      best_metric = metric;
      result.model = current;
      result.best_epoch = epoch;
    }
  }
  return result;
}

namespace {

constexpr char kMagic[8] = {'Q', 'S', 'R', 'G', 'N', 'N', '0', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError("truncated checkpoint");
  return value;
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put<double>(out, m(r, c));
  }
}

void get_matrix(std::istream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = get<double>(in);
  }
}

}  // namespace

void save_checkpoint(std::ostream& out, const std::vector<GnnModel<double>>& models) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(models.size()));
  for (const auto& m : models) {
    m.check_shapes();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(m.layer_count));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(m.dim));
    put<std::uint64_t>(out, m.rng_seed);
    for (int l = 0; l < m.layer_count; ++l) {
      put_matrix(out, m.w_self[l]);
      put_matrix(out, m.w_msg[l]);
    }
    put_matrix(out, m.w_evidence);
    put_matrix(out, m.w_entity);
  }
}

void save_checkpoint(const std::filesystem::path& path,
                     const std::vector<GnnModel<double>>& models) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  save_checkpoint(out, models);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<GnnModel<double>> load_checkpoint(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a GNN checkpoint");
  }
  auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version));
  }
  auto count = get<std::uint32_t>(in);
  std::vector<GnnModel<double>> models;
  for (std::uint32_t i = 0; i < count; ++i) {
    auto layers = get<std::uint32_t>(in);
    auto dim = get<std::uint32_t>(in);
    if (layers > 64 || dim == 0 || dim > 4096) throw ParseError("implausible checkpoint shape");
    auto m = GnnModel<double>::zeros(static_cast<int>(layers), static_cast<int>(dim));
    m.rng_seed = get<std::uint64_t>(in);
    for (std::uint32_t l = 0; l < layers; ++l) {
      get_matrix(in, m.w_self[l]);
      get_matrix(in, m.w_msg[l]);
    }
    Eigen::MatrixXd head(dim, 1);
    get_matrix(in, head);
    m.w_evidence = head;
    get_matrix(in, head);
    m.w_entity = head;
    models.push_back(std::move(m));
  }
  return models;
}

std::vector<GnnModel<double>> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return load_checkpoint(in);
}

}  // namespace quasar
