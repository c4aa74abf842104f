#pragma once

#include <cstdint>
#include <string>

#include "brgcl/graph.hpp"
#include "brgcl/param.hpp"

namespace brgcl {

/// The label-blind slice of a graph: features and structure only. The
/// unsupervised encoder path operates exclusively on this type, so label or
/// class-count leakage is ruled out structurally.
struct EncoderView {
  const Matrix* features = nullptr;
  const CsrAdjacency* adj = nullptr;

  EncoderView() = default;
  explicit EncoderView(const Graph& g) : features(&g.features()), adj(&g.adj()) {}
  EncoderView(const Matrix& x, const CsrAdjacency& a) : features(&x), adj(&a) {}

  std::size_t num_nodes() const { return adj->n; }
  std::size_t num_features() const { return features->cols; }
};

/// Two-layer graph convolution, no biases: H = A_n * relu(A_n X W1) * W2.
/// Also serves as the supervised baseline with the output dim set to the
/// class count.
struct GcnEncoder {
  Param W1;
  Param W2;

  GcnEncoder() = default;
  GcnEncoder(std::size_t in_dim, std::size_t hidden_dim, std::size_t out_dim, std::uint64_t seed);

  std::size_t in_dim() const { return W1.value.rows; }
  std::size_t hidden_dim() const { return W1.value.cols; }
  std::size_t out_dim() const { return W2.value.cols; }

  void zero_grad() {
    W1.zero_grad();
    W2.zero_grad();
  }
};

/// Activations retained by gcn_forward for the backward pass.
struct GcnCache {
  const CsrAdjacency* adj = nullptr;
  const Matrix* X = nullptr;
  Matrix U;  // pre-activation A_n X W1
  Matrix S;  // A_n relu(U)
};

/// Forward pass over a normalized adjacency. Fills `cache` for gcn_backward.
Matrix gcn_forward(const GcnEncoder& enc, const CsrAdjacency& adj_norm, const Matrix& X,
                   GcnCache& cache);

/// Forward without retaining activations (inference).
Matrix gcn_forward(const GcnEncoder& enc, const CsrAdjacency& adj_norm, const Matrix& X);

/// Accumulates dL/dW1 and dL/dW2 into the encoder grads given dL/dH.
void gcn_backward(GcnEncoder& enc, const GcnCache& cache, const Matrix& dH);

/// Two-layer MLP with 128 hidden units: logits = relu(H W1 + b1) W2 + b2.
struct MlpClassifier {
  Param W1;
  Param b1;
  Param W2;
  Param b2;

  MlpClassifier() = default;
  MlpClassifier(std::size_t in_dim, std::size_t num_classes, std::uint64_t seed,
                std::size_t hidden_dim = 128);

  std::size_t num_classes() const { return W2.value.cols; }

  void zero_grad() {
    W1.zero_grad();
    b1.zero_grad();
    W2.zero_grad();
    b2.zero_grad();
  }
};

struct MlpCache {
  const Matrix* H = nullptr;
  Matrix A;  // pre-activation H W1 + b1
  Matrix Z;  // relu(A)
};

Matrix mlp_forward(const MlpClassifier& clf, const Matrix& H, MlpCache& cache);
Matrix mlp_forward(const MlpClassifier& clf, const Matrix& H);

/// Accumulates classifier gradients given dL/dlogits.
void mlp_backward(MlpClassifier& clf, const MlpCache& cache, const Matrix& dlogits);

/// Stochastic view generation: drops each undirected edge with
/// edge_drop_prob (both directions together) and zeroes whole feature columns
/// with feature_mask_prob.
struct AugmentConfig {
  real_t edge_drop_prob = real_t(0.2);
  real_t feature_mask_prob = real_t(0.2);
};

struct AugmentedView {
  Matrix X;
  CsrAdjacency adj_norm;
};

AugmentedView augment(const EncoderView& view, const AugmentConfig& cfg, std::uint64_t seed);

/// Checkpoint format: one JSON header line (kind, dims, seed, parameter
/// shapes) followed by raw little-endian float32 payloads in declaration
/// order.
void save_encoder(const std::string& path, const GcnEncoder& enc, std::uint64_t seed);
GcnEncoder load_encoder(const std::string& path);

}  // namespace brgcl
