#include "brgcl/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace brgcl {

namespace {
constexpr double kClamp = 1e-12;
}

real_t cosine_sim(std::span<const real_t> u, std::span<const real_t> v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine_sim: dimension mismatch (" + std::to_string(u.size()) + "x1 vs " +
                         std::to_string(v.size()) + "x1)");
  }
  double num = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += static_cast<double>(u[i]) * static_cast<double>(v[i]);
    nu += static_cast<double>(u[i]) * static_cast<double>(u[i]);
    nv += static_cast<double>(v[i]) * static_cast<double>(v[i]);
  }
  double den = std::max(std::sqrt(nu) * std::sqrt(nv), kClamp);
  return static_cast<real_t>(std::abs(num) / den);
}

namespace {

/// Literal node-wise loss: L_i = -log(s_ii / (s_ii + sum_j s_ij)) with
/// s_ij = |cos(h1_i, h2_j)|; the j-sum includes j = i, so the positive enters
/// the denominator twice. C is consumed and overwritten with dL/dC.
real_t strict_infonce_inplace(Matrix& C, std::size_t& clamp_count) {
  std::size_t n = C.rows;
  double loss = 0;
  std::vector<double> inv_den(n);
  std::vector<double> pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    const real_t* row = C.row(i);
    double sum = 0;
    for (std::size_t j = 0; j < n; ++j) sum += std::abs(static_cast<double>(row[j]));
    double s_ii = std::abs(static_cast<double>(row[i]));
    double den = sum + s_ii;
    double num = s_ii;
    if (num < kClamp) {
      num = kClamp;
      ++clamp_count;
    }
    bool den_clamped = den < 2 * kClamp;
    if (den_clamped) den = 2 * kClamp;
    loss += -std::log(num / den);
    inv_den[i] = den_clamped ? 0.0 : 1.0 / den;
    pos[i] = s_ii;
  }
  for (std::size_t i = 0; i < n; ++i) {
    real_t* row = C.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      double sgn = row[j] > 0 ? 1.0 : (row[j] < 0 ? -1.0 : 0.0);
      double w = inv_den[i];
      if (j == i) {
        w *= 2.0;
        if (pos[i] >= kClamp) w -= 1.0 / pos[i];
      }
      row[j] = static_cast<real_t>(w * sgn);
    }
  }
  return static_cast<real_t>(loss);
}

/// Conventional variant: signed cosine, temperature, positive counted once.
real_t conventional_infonce_inplace(Matrix& C, real_t tau, std::size_t& clamp_count) {
  std::size_t n = C.rows;
  double loss = 0;
  double inv_tau = 1.0 / static_cast<double>(tau);
  for (std::size_t i = 0; i < n; ++i) {
    real_t* row = C.row(i);
    double mx = -1e300;
    for (std::size_t j = 0; j < n; ++j) mx = std::max(mx, static_cast<double>(row[j]) * inv_tau);
    double sum = 0;
    for (std::size_t j = 0; j < n; ++j) sum += std::exp(static_cast<double>(row[j]) * inv_tau - mx);
    double log_p_pos = static_cast<double>(row[i]) * inv_tau - mx - std::log(sum);
    loss += -log_p_pos;
    if (std::exp(log_p_pos) < kClamp) ++clamp_count;
    for (std::size_t j = 0; j < n; ++j) {
      double p = std::exp(static_cast<double>(row[j]) * inv_tau - mx) / sum;
      row[j] = static_cast<real_t>((p - (j == i ? 1.0 : 0.0)) * inv_tau);
    }
  }
  return static_cast<real_t>(loss);
}

}  // namespace

LossOutput node_infonce(const Matrix& H1, const Matrix& H2, const InfoNceOptions& opts) {
  check_dims(H1.same_shape(H2), "node_infonce", H1, H2);
  if (!opts.strict && opts.tau <= 0) {
    throw std::invalid_argument("node_infonce: tau must be positive");
  }

  Matrix H1n = row_l2_normalize(H1);
  Matrix H2n = row_l2_normalize(H2);
  Matrix C = matmul_abt(H1n, H2n);  // overwritten with dL/dC below

  LossOutput out;
  out.value = opts.strict ? strict_infonce_inplace(C, out.clamp_count)
                          : conventional_infonce_inplace(C, opts.tau, out.clamp_count);
  out.dH1 = row_l2_normalize_backward(H1, matmul(C, H2n));
  out.dH2 = row_l2_normalize_backward(H2, matmul_atb(C, H1n));
  return out;
}

LossOutput proto_loss(const Matrix& H, const Matrix& C, const std::vector<int>& z, real_t tau) {
  check_dims(H.cols == C.cols, "proto_loss", H, C);
  if (z.size() != H.rows) {
    throw std::invalid_argument("proto_loss: assignment length " + std::to_string(z.size()) +
                                " does not match " + std::to_string(H.rows) + " rows");
  }
  if (tau <= 0) throw std::invalid_argument("proto_loss: tau must be positive");
  std::size_t n = H.rows;
  std::size_t k = C.rows;
  for (int zi : z) {
    if (zi < 0 || static_cast<std::size_t>(zi) >= k) {
      throw std::invalid_argument("proto_loss: assignment id " + std::to_string(zi) +
                                  " outside [0, " + std::to_string(k) + ")");
    }
  }

  Matrix logits = matmul_abt(H, C);
  double inv_tau = 1.0 / static_cast<double>(tau);
  LossOutput out;
  out.dH = Matrix(n, H.cols);

  double loss = 0;
  Matrix P(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    const real_t* lrow = logits.row(i);
    real_t* prow = P.row(i);
    double mx = -1e300;
    for (std::size_t c = 0; c < k; ++c) mx = std::max(mx, static_cast<double>(lrow[c]) * inv_tau);
    double sum = 0;
    for (std::size_t c = 0; c < k; ++c) {
      double e = std::exp(static_cast<double>(lrow[c]) * inv_tau - mx);
      prow[c] = static_cast<real_t>(e);
      sum += e;
    }
    std::size_t zi = static_cast<std::size_t>(z[i]);
    loss += -(static_cast<double>(lrow[zi]) * inv_tau - mx - std::log(sum));
    for (std::size_t c = 0; c < k; ++c) prow[c] = static_cast<real_t>(prow[c] / sum);
    prow[zi] -= real_t(1);
  }
  out.value = static_cast<real_t>(loss / static_cast<double>(n));

  real_t coeff = static_cast<real_t>(inv_tau / static_cast<double>(n));
  out.dH = scale(matmul(P, C), coeff);
  return out;
}

LossOutput combined_loss(const Matrix& H, const Matrix& H1, const Matrix& H2, const Matrix& C,
                         const std::vector<int>& z, real_t tau, const InfoNceOptions& opts) {
  LossOutput node = node_infonce(H1, H2, opts);
  LossOutput proto = proto_loss(H, C, z, tau);
  LossOutput out;
  out.value = node.value + proto.value;
  out.dH1 = std::move(node.dH1);
  out.dH2 = std::move(node.dH2);
  out.dH = std::move(proto.dH);
  out.clamp_count = node.clamp_count;
  return out;
}

}  // namespace brgcl
