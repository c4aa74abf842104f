#pragma once

#include <vector>

#include "brgcl/graph.hpp"
#include "brgcl/matrix.hpp"

namespace brgcl {

/// The raw propagation recurrence Z <- (1 - alpha) A_n Z + alpha Z0, iterated
/// T times from Z0. Shared by pseudo-label propagation (one-hot rows) and the
/// classifier's soft-label construction (zero rows for unlabeled nodes).
Matrix propagate_matrix(const CsrAdjacency& adj_norm, const Matrix& Z0, real_t alpha,
                        std::size_t T);

/// Propagates one-hot pseudo labels and renormalizes each row to sum 1, so
/// the result rows are probability distributions. The symmetric adjacency
/// does not preserve row sums, hence the renormalization. Zero entries stay
/// exactly zero; an edgeless graph returns Z0 unchanged.
Matrix label_propagate(const CsrAdjacency& adj_norm, const Matrix& Z0, real_t alpha,
                       std::size_t T);

/// phi_i = -log(max(Z[i, z_i], 1e-12)): the cross-entropy between the one-hot
/// pseudo label and its propagated soft label. The clamp bounds phi by about
/// 27.6.
std::vector<real_t> confidence_scores(const std::vector<int>& z, const Matrix& soft_labels);

/// gamma = 1 - min(gamma0, gamma0 * t / t_max): decays linearly from 1 at
/// t = 0 to 1 - gamma0 at t = t_max.
real_t threshold(std::size_t t, std::size_t t_max, real_t gamma0);

/// T_k = { i : z_i = k and phi_i < gamma } for every cluster k (strict
/// inequality, so gamma = 0 selects nothing).
std::vector<std::vector<std::size_t>> confident_sets(const std::vector<int>& z,
                                                     const std::vector<real_t>& phi, real_t gamma);

/// c_k = mean of H rows in T_k. An empty T_k falls back to the mean over all
/// nodes with z_i = k; a cluster with no members at all is an internal error.
Matrix robust_prototypes(const Matrix& H, const std::vector<std::vector<std::size_t>>& sets,
                         const std::vector<int>& z);

/// One-hot rows from assignments over k columns.
Matrix one_hot(const std::vector<int>& z, std::size_t k);

struct ConfidenceReport {
  Matrix soft_labels;
  std::vector<real_t> phi;
  real_t gamma = 1;
  std::vector<std::vector<std::size_t>> sets;
  Matrix prototypes;
};

/// Convenience bundle: propagate, score, select, and average in one call.
ConfidenceReport estimate_confidence(const CsrAdjacency& adj_norm, const Matrix& H,
                                     const std::vector<int>& z, std::size_t k, real_t alpha,
                                     std::size_t T, real_t gamma);

}  // namespace brgcl
