#include "brgcl/noise.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "brgcl/rng.hpp"

namespace brgcl {

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "label-symmetric") return NoiseKind::LabelSymmetric;
  if (name == "label-asymmetric") return NoiseKind::LabelAsymmetric;
  if (name == "attribute") return NoiseKind::Attribute;
  throw ConfigError("unknown noise kind \"" + name +
                    "\" (expected label-symmetric, label-asymmetric, or attribute)");
}

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::LabelSymmetric: return "label-symmetric";
    case NoiseKind::LabelAsymmetric: return "label-asymmetric";
    case NoiseKind::Attribute: return "attribute";
  }
  return "unknown";
}

Matrix symmetric_transition(std::size_t K, double eps) {
  if (K < 2) throw std::invalid_argument("symmetric_transition: K must be >= 2");
  if (eps < 0 || eps > 1) throw std::invalid_argument("symmetric_transition: eps outside [0, 1]");
  Matrix q(K, K);
  real_t off = static_cast<real_t>(eps / static_cast<double>(K - 1));
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) q(i, j) = i == j ? static_cast<real_t>(1.0 - eps) : off;
  }
  return q;
}

Matrix asymmetric_transition(std::size_t K, double eps) {
  if (K < 2) throw std::invalid_argument("asymmetric_transition: K must be >= 2");
  if (eps < 0 || eps > 1) throw std::invalid_argument("asymmetric_transition: eps outside [0, 1]");
  Matrix q(K, K);
  for (std::size_t i = 0; i < K; ++i) {
    q(i, i) = static_cast<real_t>(1.0 - eps);
    q(i, (i + 1) % K) += static_cast<real_t>(eps);
  }
  return q;
}

Graph inject_label_noise(const Graph& g, const Matrix& Q, std::uint64_t seed) {
  if (!g.has_labels()) throw std::invalid_argument("inject_label_noise: graph has no labels");
  std::size_t K = static_cast<std::size_t>(g.num_classes());
  if (Q.rows != K || Q.cols != K) {
    throw DimensionError("inject_label_noise: dimension mismatch (" + Q.shape_str() + " vs " +
                         std::to_string(K) + "x" + std::to_string(K) + ")");
  }
  for (std::size_t i = 0; i < K; ++i) {
    real_t sum = 0;
    for (std::size_t j = 0; j < K; ++j) {
      if (Q(i, j) < 0) throw std::invalid_argument("inject_label_noise: negative entry in Q");
      sum += Q(i, j);
    }
    if (std::abs(static_cast<double>(sum) - 1.0) > 1e-9) {
      throw std::invalid_argument("inject_label_noise: Q row " + std::to_string(i) +
                                  " sums to " + std::to_string(static_cast<double>(sum)));
    }
  }

  std::vector<int> labels = g.labels();
  Rng rng(seed);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!g.train_mask[i] || labels[i] < 0) continue;
    double u = rng.uniform();
    const real_t* row = Q.row(static_cast<std::size_t>(labels[i]));
    double cdf = 0;
    std::size_t picked = K - 1;
    for (std::size_t j = 0; j < K; ++j) {
      cdf += static_cast<double>(row[j]);
      if (u < cdf) {
        picked = j;
        break;
      }
    }
    labels[i] = static_cast<int>(picked);
  }

  Graph out(g.features(), g.adj(), std::move(labels), g.num_classes());
  out.train_mask = g.train_mask;
  out.val_mask = g.val_mask;
  out.test_mask = g.test_mask;
  return out;
}

Graph inject_attribute_noise(const Graph& g, double p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw std::invalid_argument("inject_attribute_noise: p outside [0, 1]");
  Matrix features = g.features();
  std::size_t d = features.cols;
  std::size_t m = static_cast<std::size_t>(p * static_cast<double>(d));

  if (m >= 2) {
    Rng rng(seed);
    std::vector<std::size_t> coords(d);
    std::vector<real_t> saved(m);
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < features.rows; ++i) {
      std::iota(coords.begin(), coords.end(), std::size_t(0));
      for (std::size_t t = 0; t < m; ++t) {
        std::size_t j = t + rng.uniform_int(d - t);
        std::swap(coords[t], coords[j]);
      }
      real_t* row = features.row(i);
      for (std::size_t t = 0; t < m; ++t) saved[t] = row[coords[t]];
      std::iota(perm.begin(), perm.end(), std::size_t(0));
      rng.shuffle(perm);
      for (std::size_t t = 0; t < m; ++t) row[coords[t]] = saved[perm[t]];
    }
  }

  Graph out(std::move(features), g.adj(), g.labels(), g.num_classes());
  out.train_mask = g.train_mask;
  out.val_mask = g.val_mask;
  out.test_mask = g.test_mask;
  return out;
}

Graph inject_noise(const Graph& g, const NoiseSpec& spec) {
  switch (spec.kind) {
    case NoiseKind::LabelSymmetric:
      return inject_label_noise(
          g, symmetric_transition(static_cast<std::size_t>(g.num_classes()), spec.level),
          spec.seed);
    case NoiseKind::LabelAsymmetric:
      return inject_label_noise(
          g, asymmetric_transition(static_cast<std::size_t>(g.num_classes()), spec.level),
          spec.seed);
    case NoiseKind::Attribute:
      return inject_attribute_noise(g, spec.level, spec.seed);
  }
  throw std::logic_error("inject_noise: unreachable");
}

}  // namespace brgcl
