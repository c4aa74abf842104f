#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brgcl/matrix.hpp"
#include "brgcl/noise.hpp"

namespace brgcl {

/// Fraction of masked nodes with pred == truth. Throws on an empty mask.
real_t classification_accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                               const std::vector<std::uint8_t>& mask);

struct ClusterMetrics {
  real_t acc = 0;
  real_t nmi = 0;
  real_t ari = 0;
};

/// Clustering quality against ground truth with K classes:
///  - acc: best one-to-one cluster/class matching accuracy (Hungarian on the
///    contingency table);
///  - nmi: mutual information normalized by the arithmetic mean of the two
///    entropies; a degenerate single-cluster or single-class side gives 0;
///  - ari: adjusted Rand index under the permutation-model expectation; two
///    identical trivial partitions (zero denominator) give 1.
ClusterMetrics cluster_eval(const std::vector<int>& assignments, const std::vector<int>& truth,
                            std::size_t K);

/// Best-of-`restarts` Lloyd runs by within-cluster sum of squares, each
/// seeded deterministically from `seed`.
std::vector<int> kmeans_embed(const Matrix& H, std::size_t K, std::uint64_t seed,
                              std::size_t restarts = 10);

/// Minimum-cost assignment of rows to distinct columns (rows <= cols).
/// Returns the column picked for each row. Exposed for testing against the
/// exhaustive matcher.
std::vector<std::size_t> hungarian_min(const Matrix& cost);

/// One evaluated result with enough metadata to regenerate it.
struct MetricsRecord {
  std::string task;   // "classification" | "clustering"
  std::string model;  // "brgcl" | "gcn_baseline"
  std::string dataset;
  NoiseSpec noise;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  real_t accuracy = 0;  // classification
  ClusterMetrics clustering;
  std::size_t k_tilde = 0;  // clusters inferred on the final embeddings
};

}  // namespace brgcl
