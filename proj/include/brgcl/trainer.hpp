#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "brgcl/encoder.hpp"
#include "brgcl/graph.hpp"
#include "brgcl/losses.hpp"

namespace brgcl {

struct TrainConfig {
  std::size_t t_max = 400;          // encoder epochs
  real_t lr = real_t(1e-3);
  real_t tau = real_t(0.5);         // prototypical softmax temperature
  real_t xi = real_t(0.20);         // new-prototype margin
  real_t gamma0 = real_t(0.3);      // confidence threshold floor offset
  real_t alpha = real_t(0.1);       // pseudo-label propagation teleport
  std::size_t T = 10;               // pseudo-label propagation steps
  real_t beta = real_t(0.1);        // classifier soft-label teleport
  std::size_t T_cls = 10;           // classifier propagation steps
  AugmentConfig augment;
  std::size_t hidden_dim = 256;
  std::size_t embed_dim = 128;
  std::uint64_t seed = 0;
  std::size_t classifier_epochs = 200;
  std::size_t warmup = 0;           // epochs before the prototypical term backpropagates
  bool strict_infonce = true;

  void validate() const;
};

struct EpochRecord {
  real_t loss_node = 0;
  real_t loss_proto = 0;
  std::size_t k_tilde = 0;
  std::size_t n_confident = 0;
  real_t gamma = 1;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
};

/// Called after each epoch's optimizer step with the epoch index (0-based).
using EpochCallback =
    std::function<void(std::size_t, const GcnEncoder&, const TrainHistory&)>;

/// Unsupervised encoder training. Per epoch, in order: full-graph embedding;
/// two augmented views and their embeddings; the node-wise contrastive loss;
/// nonparametric pseudo-labels and the inferred prototype count; propagated
/// soft labels; the scheduled confidence threshold; confident sets; robust
/// prototypes; one Adam step on the combined loss. The view overload is the
/// implementation and structurally cannot read labels, class counts, or
/// masks; the Graph overload additionally asserts at runtime that no label
/// access happened.
std::pair<GcnEncoder, TrainHistory> train_encoder(const EncoderView& view,
                                                  const TrainConfig& cfg,
                                                  const EpochCallback& callback = nullptr);
std::pair<GcnEncoder, TrainHistory> train_encoder(const Graph& g, const TrainConfig& cfg,
                                                  const EpochCallback& callback = nullptr);

/// Decoupled classifier training on a frozen embedding matrix H. Builds
/// one-hot rows for labeled train nodes (zero rows elsewhere), propagates
/// them with teleport beta for T_cls steps, row-softmaxes into soft labels,
/// and fits the MLP by Adam on the soft-label cross-entropy over the train
/// set. The encoder that produced H is untouched.
MlpClassifier train_classifier(const Graph& g_noisy, const Matrix& H, const TrainConfig& cfg);

/// Supervised two-layer GCN baseline trained with cross-entropy on the
/// (possibly noisy) train labels; same hidden width and optimizer as the
/// encoder, output width = class count.
GcnEncoder train_gcn_baseline(const Graph& g_noisy, const TrainConfig& cfg);

/// Row argmax with ties resolved to the lowest class id.
std::vector<int> argmax_rows(const Matrix& logits);

/// Predictions of a GCN model (baseline) on a graph.
std::vector<int> predict(const GcnEncoder& model, const CsrAdjacency& adj_norm, const Matrix& X);

/// Predictions of the decoupled classifier on fixed embeddings.
std::vector<int> predict(const MlpClassifier& clf, const Matrix& H);

/// Per-epoch history CSV: epoch, loss_node, loss_proto, k_tilde, n_confident, gamma.
void write_history_csv(const std::string& path, const TrainHistory& history);

}  // namespace brgcl
