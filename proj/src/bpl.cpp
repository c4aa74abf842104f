#include "brgcl/bpl.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "brgcl/rng.hpp"

namespace brgcl {

namespace {

Matrix member_means(const Matrix& H, const std::vector<int>& z, std::size_t k) {
  Matrix means(k, H.cols);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < H.rows; ++i) {
    std::size_t c = static_cast<std::size_t>(z[i]);
    counts[c] += 1;
    const real_t* row = H.row(i);
    real_t* mean = means.row(c);
    for (std::size_t j = 0; j < H.cols; ++j) mean[j] += row[j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    real_t* mean = means.row(c);
    for (std::size_t j = 0; j < H.cols; ++j) mean[j] /= static_cast<real_t>(counts[c]);
  }
  return means;
}

}  // namespace

PseudoLabeling dp_means(const Matrix& H, real_t xi, std::size_t max_iters) {
  if (xi <= 0) throw std::invalid_argument("dp_means: xi must be positive");
  if (max_iters < 1) throw std::invalid_argument("dp_means: max_iters must be >= 1");
  if (H.rows == 0) throw std::invalid_argument("dp_means: empty input");
  require_finite(H, "dp_means");

  std::size_t n = H.rows;
  std::size_t d = H.cols;

  std::vector<std::vector<real_t>> protos;
  {
    std::vector<real_t> mean(d, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const real_t* row = H.row(i);
      for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<real_t>(n);
    protos.push_back(std::move(mean));
  }

  PseudoLabeling result;
  result.z.assign(n, 0);
  std::vector<int> prev_z;

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    // Distances to the prototypes existing at sweep start are computed in
    // cache-friendly point blocks; prototypes spawned mid-sweep are only
    // visible to later points, so those few are scanned in the sequential
    // tail. Comparison order per point is unchanged (ascending prototype id,
    // strict <), so assignments are bit-identical to the plain sweep.
    std::size_t k0 = protos.size();
    Matrix P(k0, d);
    for (std::size_t c = 0; c < k0; ++c) {
      std::copy(protos[c].begin(), protos[c].end(), P.row(c));
    }
    std::vector<real_t> best(n, std::numeric_limits<real_t>::max());
    std::vector<std::size_t> best_k(n, 0);
    constexpr std::size_t kBlock = 8;
    for (std::size_t i0 = 0; i0 < n; i0 += kBlock) {
      std::size_t ib = std::min(kBlock, n - i0);
      for (std::size_t c = 0; c < k0; ++c) {
        const real_t* p = P.row(c);
        for (std::size_t m = 0; m < ib; ++m) {
          real_t dist = squared_distance(H.row(i0 + m), p, d);
          if (dist < best[i0 + m]) {
            best[i0 + m] = dist;
            best_k[i0 + m] = c;
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const real_t* row = H.row(i);
      real_t b = best[i];
      std::size_t bk = best_k[i];
      for (std::size_t c = k0; c < protos.size(); ++c) {
        real_t dist = squared_distance(row, protos[c].data(), d);
        if (dist < b) {
          b = dist;
          bk = c;
        }
      }
      if (b > xi) {
        result.z[i] = static_cast<int>(protos.size());
        protos.emplace_back(row, row + d);
      } else {
        result.z[i] = static_cast<int>(bk);
      }
    }

    Matrix means = member_means(H, result.z, protos.size());
    std::vector<std::size_t> counts(protos.size(), 0);
    for (int zi : result.z) counts[static_cast<std::size_t>(zi)] += 1;

    std::vector<int> remap(protos.size(), -1);
    std::vector<std::vector<real_t>> compacted;
    for (std::size_t c = 0; c < protos.size(); ++c) {
      if (counts[c] == 0) continue;
      remap[c] = static_cast<int>(compacted.size());
      compacted.emplace_back(means.row(c), means.row(c) + d);
    }
    protos = std::move(compacted);
    for (int& zi : result.z) zi = remap[static_cast<std::size_t>(zi)];

    real_t obj = static_cast<real_t>(protos.size()) * xi;
    for (std::size_t i = 0; i < n; ++i) {
      obj += squared_distance(H.row(i), protos[static_cast<std::size_t>(result.z[i])].data(), d);
    }
    result.objective_trace.push_back(obj);
    result.iterations = iter + 1;

    if (result.z == prev_z) {
      result.converged = true;
      break;
    }
    prev_z = result.z;
  }

  result.k_tilde = protos.size();
  result.prototypes = Matrix(protos.size(), d);
  for (std::size_t c = 0; c < protos.size(); ++c) {
    real_t* row = result.prototypes.row(c);
    for (std::size_t j = 0; j < d; ++j) row[j] = protos[c][j];
  }
  result.objective = result.objective_trace.back();
  return result;
}

std::vector<int> fixed_k_oracle(const Matrix& H, std::size_t K, std::uint64_t seed,
                                std::size_t max_iters) {
  if (K < 1 || K > H.rows) {
    throw std::invalid_argument("fixed_k_oracle: K must lie in [1, " + std::to_string(H.rows) +
                                "]");
  }
  std::size_t n = H.rows;
  std::size_t d = H.cols;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t t = 0; t < K; ++t) {
    std::size_t j = t + rng.uniform_int(n - t);
    std::swap(order[t], order[j]);
  }

  Matrix centroids(K, d);
  for (std::size_t c = 0; c < K; ++c) {
    const real_t* row = H.row(order[c]);
    std::copy(row, row + d, centroids.row(c));
  }

  std::vector<int> z(n, 0);
  std::vector<int> prev;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const real_t* row = H.row(i);
      real_t best = std::numeric_limits<real_t>::max();
      std::size_t best_k = 0;
      for (std::size_t c = 0; c < K; ++c) {
        real_t dist = squared_distance(row, centroids.row(c), d);
        if (dist < best) {
          best = dist;
          best_k = c;
        }
      }
      z[i] = static_cast<int>(best_k);
    }
    if (z == prev) break;
    prev = z;

    Matrix means = member_means(H, z, K);
    std::vector<std::size_t> counts(K, 0);
    for (int zi : z) counts[static_cast<std::size_t>(zi)] += 1;
    for (std::size_t c = 0; c < K; ++c) {
      if (counts[c] == 0) continue;  // empty clusters keep their centroid
      std::copy(means.row(c), means.row(c) + d, centroids.row(c));
    }
  }
  return z;
}

real_t wcss(const Matrix& H, const std::vector<int>& z, std::size_t K) {
  Matrix means = member_means(H, z, K);
  real_t total = 0;
  for (std::size_t i = 0; i < H.rows; ++i) {
    total += squared_distance(H.row(i), means.row(static_cast<std::size_t>(z[i])), H.cols);
  }
  return total;
}

}  // namespace brgcl
