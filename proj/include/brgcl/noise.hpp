#pragma once

#include <cstdint>
#include <string>

#include "brgcl/graph.hpp"
#include "brgcl/matrix.hpp"

namespace brgcl {

enum class NoiseKind { LabelSymmetric, LabelAsymmetric, Attribute };

NoiseKind parse_noise_kind(const std::string& name);
std::string noise_kind_name(NoiseKind kind);

/// One corruption setting: epsilon for label noise, shuffle fraction p for
/// attribute noise.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::LabelSymmetric;
  double level = 0.0;
  std::uint64_t seed = 0;
};

/// Q_ii = 1 - eps, Q_ij = eps / (K - 1) elsewhere. Rows sum to 1.
Matrix symmetric_transition(std::size_t K, double eps);

/// Q_ii = 1 - eps, Q_{i,(i+1) mod K} = eps, zeros elsewhere. Mislabeling flows
/// cyclically between adjacent class ids.
Matrix asymmetric_transition(std::size_t K, double eps);

/// Resamples every train-mask label from its row of Q. Validation and test
/// labels, features, edges, and masks are untouched; returns a new graph.
Graph inject_label_noise(const Graph& g, const Matrix& Q, std::uint64_t seed);

/// For each node independently, picks floor(p * D) coordinates without
/// replacement and applies a uniform random permutation to the values at
/// those coordinates within that node's row. Preserves each row's multiset.
Graph inject_attribute_noise(const Graph& g, double p, std::uint64_t seed);

/// Dispatches on spec.kind; label kinds build their transition matrix from
/// spec.level against g.num_classes().
Graph inject_noise(const Graph& g, const NoiseSpec& spec);

}  // namespace brgcl
