#include "brgcl/bec.hpp"

#include <cmath>
#include <stdexcept>

namespace brgcl {

Matrix propagate_matrix(const CsrAdjacency& adj_norm, const Matrix& Z0, real_t alpha,
                        std::size_t T) {
  if (adj_norm.n != Z0.rows) {
    throw DimensionError("propagate_matrix: dimension mismatch (adjacency " +
                         std::to_string(adj_norm.n) + "x" + std::to_string(adj_norm.n) + " vs " +
                         Z0.shape_str() + ")");
  }
  if (alpha <= 0 || alpha >= 1) {
    throw std::invalid_argument("propagate_matrix: alpha must lie in (0, 1)");
  }
  if (T < 1) throw std::invalid_argument("propagate_matrix: T must be >= 1");

  Matrix Z = Z0;
  for (std::size_t t = 0; t < T; ++t) {
    Matrix next = spmm(adj_norm, Z);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next.data[i] = (real_t(1) - alpha) * next.data[i] + alpha * Z0.data[i];
    }
    Z = std::move(next);
  }
  return Z;
}

Matrix label_propagate(const CsrAdjacency& adj_norm, const Matrix& Z0, real_t alpha,
                       std::size_t T) {
  for (std::size_t i = 0; i < Z0.rows; ++i) {
    const real_t* row = Z0.row(i);
    std::size_t ones = 0;
    bool clean = true;
    for (std::size_t j = 0; j < Z0.cols; ++j) {
      if (row[j] == real_t(1)) {
        ++ones;
      } else if (row[j] != real_t(0)) {
        clean = false;
      }
    }
    if (!clean || ones != 1) {
      throw std::invalid_argument("label_propagate: row " + std::to_string(i) +
                                  " of Z0 is not one-hot");
    }
  }

  Matrix Z = propagate_matrix(adj_norm, Z0, alpha, T);
  for (std::size_t i = 0; i < Z.rows; ++i) {
    real_t* row = Z.row(i);
    real_t sum = 0;
    for (std::size_t j = 0; j < Z.cols; ++j) sum += row[j];
    for (std::size_t j = 0; j < Z.cols; ++j) row[j] /= sum;
  }
  return Z;
}

std::vector<real_t> confidence_scores(const std::vector<int>& z, const Matrix& soft_labels) {
  if (z.size() != soft_labels.rows) {
    throw std::invalid_argument("confidence_scores: assignment length does not match rows");
  }
  std::vector<real_t> phi(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    std::size_t zi = static_cast<std::size_t>(z[i]);
    if (z[i] < 0 || zi >= soft_labels.cols) {
      throw std::invalid_argument("confidence_scores: assignment id out of range");
    }
    double p = std::max(static_cast<double>(soft_labels(i, zi)), 1e-12);
    phi[i] = static_cast<real_t>(-std::log(p));
  }
  return phi;
}

real_t threshold(std::size_t t, std::size_t t_max, real_t gamma0) {
  if (t_max < 1) throw std::invalid_argument("threshold: t_max must be >= 1");
  if (t > t_max) throw std::invalid_argument("threshold: t must lie in [0, t_max]");
  if (gamma0 <= 0 || gamma0 >= 1) throw std::invalid_argument("threshold: gamma0 must lie in (0, 1)");
  real_t ramp = gamma0 * static_cast<real_t>(t) / static_cast<real_t>(t_max);
  return real_t(1) - std::min(gamma0, ramp);
}

std::vector<std::vector<std::size_t>> confident_sets(const std::vector<int>& z,
                                                     const std::vector<real_t>& phi,
                                                     real_t gamma) {
  if (z.size() != phi.size()) {
    throw std::invalid_argument("confident_sets: z and phi lengths differ");
  }
  int max_id = -1;
  for (int zi : z) max_id = std::max(max_id, zi);
  std::vector<std::vector<std::size_t>> sets(static_cast<std::size_t>(max_id + 1));
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 0) throw std::invalid_argument("confident_sets: negative assignment id");
    if (phi[i] < gamma) sets[static_cast<std::size_t>(z[i])].push_back(i);
  }
  return sets;
}

Matrix robust_prototypes(const Matrix& H, const std::vector<std::vector<std::size_t>>& sets,
                         const std::vector<int>& z) {
  std::size_t k = sets.size();
  Matrix C(k, H.cols);
  for (std::size_t c = 0; c < k; ++c) {
    const std::vector<std::size_t>* members = &sets[c];
    std::vector<std::size_t> fallback;
    if (members->empty()) {
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (static_cast<std::size_t>(z[i]) == c) fallback.push_back(i);
      }
      if (fallback.empty()) {
        throw std::logic_error("robust_prototypes: cluster " + std::to_string(c) +
                               " has no members");
      }
      members = &fallback;
    }
    real_t* row = C.row(c);
    for (std::size_t i : *members) {
      const real_t* h = H.row(i);
      for (std::size_t j = 0; j < H.cols; ++j) row[j] += h[j];
    }
    for (std::size_t j = 0; j < H.cols; ++j) row[j] /= static_cast<real_t>(members->size());
  }
  return C;
}

Matrix one_hot(const std::vector<int>& z, std::size_t k) {
  Matrix Z0(z.size(), k);
  for (std::size_t i = 0; i < z.size(); ++i) {
    std::size_t zi = static_cast<std::size_t>(z[i]);
    if (z[i] < 0 || zi >= k) {
      throw std::invalid_argument("one_hot: assignment id " + std::to_string(z[i]) +
                                  " outside [0, " + std::to_string(k) + ")");
    }
    Z0(i, zi) = real_t(1);
  }
  return Z0;
}

ConfidenceReport estimate_confidence(const CsrAdjacency& adj_norm, const Matrix& H,
                                     const std::vector<int>& z, std::size_t k, real_t alpha,
                                     std::size_t T, real_t gamma) {
  ConfidenceReport report;
  report.soft_labels = label_propagate(adj_norm, one_hot(z, k), alpha, T);
  report.phi = confidence_scores(z, report.soft_labels);
  report.gamma = gamma;
  report.sets = confident_sets(z, report.phi, gamma);
  report.sets.resize(k);
  report.prototypes = robust_prototypes(H, report.sets, z);
  return report;
}

}  // namespace brgcl
