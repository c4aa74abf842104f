#pragma once

#include <span>
#include <vector>

#include "brgcl/matrix.hpp"

namespace brgcl {

struct LossOutput {
  real_t value = 0;
  Matrix dH1;
  Matrix dH2;
  Matrix dH;
  std::size_t clamp_count = 0;  // zero-similarity positives hit by the log clamp
};

/// |<u, v>| / (|u| |v|) with the denominator clamped at 1e-12; both-zero
/// vectors map to 0. Range [0, 1].
real_t cosine_sim(std::span<const real_t> u, std::span<const real_t> v);

struct InfoNceOptions {
  /// Literal form: absolute cosine, no temperature, and the positive pair
  /// counted once in the numerator and twice in the denominator (the j-sum
  /// runs over all j). Every per-node term is then >= ln 2.
  bool strict = true;
  /// Temperature for the conventional variant (strict = false), which uses
  /// signed cosine and counts the positive once in the denominator.
  real_t tau = real_t(0.5);
};

/// Node-wise contrastive loss over two views, summed over nodes. Gradients
/// are returned for both inputs.
LossOutput node_infonce(const Matrix& H1, const Matrix& H2, const InfoNceOptions& opts = {});

/// Prototypical contrastive loss, averaged over nodes: softmax of h_i . c_k
/// over prototypes at temperature tau against node i's pseudo label z_i.
/// Prototypes are constants (no gradient); gradient is returned for H only.
LossOutput proto_loss(const Matrix& H, const Matrix& C, const std::vector<int>& z, real_t tau);

/// Sum of node_infonce(H1, H2) and proto_loss(H, C, z, tau); dH1/dH2 carry
/// the node term's gradients and dH the prototypical term's.
LossOutput combined_loss(const Matrix& H, const Matrix& H1, const Matrix& H2, const Matrix& C,
                         const std::vector<int>& z, real_t tau, const InfoNceOptions& opts = {});

}  // namespace brgcl
