#pragma once

#include <cstdint>
#include <vector>

#include "brgcl/matrix.hpp"

namespace brgcl {

/// Nonparametric pseudo-labeling result. The objective is
/// sum_i |h_i - c_{z_i}|^2 + xi * K, recorded after every iteration.
struct PseudoLabeling {
  std::vector<int> z;
  Matrix prototypes;  // k_tilde x dim
  std::size_t k_tilde = 0;
  real_t objective = 0;
  std::vector<real_t> objective_trace;
  std::size_t iterations = 0;
  bool converged = false;
};

/// DP-means: K-means in the small-variance limit, spawning a new prototype at
/// h_i whenever min_k |h_i - c_k|^2 exceeds xi.
///
/// Procedure: one prototype at the global mean; repeat { assign nodes in
/// index order, spawning on margin violations (ties -> lowest k); recompute
/// prototypes as member means; drop empty prototypes and compact ids } until
/// assignments repeat or max_iters passes complete. Deterministic. Callers
/// pass L2-normalized rows so that xi is compared against bounded squared
/// distances (at most 4 on the unit sphere).
PseudoLabeling dp_means(const Matrix& H, real_t xi, std::size_t max_iters = 50);

/// Lloyd's K-means with centroids initialized at K distinct rows drawn by the
/// seed. Empty clusters keep their previous centroid. Used as the test oracle
/// and by the clustering evaluation.
std::vector<int> fixed_k_oracle(const Matrix& H, std::size_t K, std::uint64_t seed,
                                std::size_t max_iters = 100);

/// Within-cluster sum of squared distances to member means.
real_t wcss(const Matrix& H, const std::vector<int>& z, std::size_t K);

}  // namespace brgcl
