#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "brgcl/encoder.hpp"
#include "brgcl/gradcheck.hpp"
#include "brgcl/graph.hpp"
#include "brgcl/losses.hpp"
#include "brgcl/rng.hpp"

namespace brgcl {

namespace {

constexpr std::size_t kMaxAttempts = 64;

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (real_t& x : m.data) x = static_cast<real_t>(rng.normal());
  return m;
}

CsrAdjacency random_normalized_adjacency(std::size_t n, Rng& rng) {
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(i, (i + 1) % n);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (rng.bernoulli(0.25)) edges.emplace_back(i, j);
    }
  }
  return normalized_adjacency(build_adjacency(n, edges));
}

real_t min_abs(const Matrix& m) {
  real_t best = std::numeric_limits<real_t>::infinity();
  for (real_t x : m.data) best = std::min(best, std::abs(x));
  return best;
}

/// Smallest |cosine| between any row pair of the two matrices; the literal
/// contrastive loss is non-differentiable where a cosine crosses zero, so
/// instances are rejected until every pair clears a margin.
real_t min_abs_cosine(const Matrix& a, const Matrix& b) {
  return min_abs(matmul_abt(row_l2_normalize(a), row_l2_normalize(b)));
}

constexpr real_t kKinkMargin = real_t(5e-4);

std::vector<int> random_assignments(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<int> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<int>(rng.uniform_int(k));
  return z;
}

GradSuiteResult check_row_normalize(std::size_t seed_index, real_t tol) {
  Rng rng(mix_seed(0x5EED517Eu, seed_index, 1));
  Param X;
  X.value = random_matrix(7, 5, rng);
  X.grad = Matrix(7, 5);
  Matrix R = random_matrix(7, 5, rng);
  auto loss_fn = [&]() -> real_t {
    Matrix Y = row_l2_normalize(X.value);
    real_t loss = 0;
    for (std::size_t i = 0; i < Y.data.size(); ++i) loss += R.data[i] * Y.data[i];
    X.grad = row_l2_normalize_backward(X.value, R);
    return loss;
  };
  GradCheckReport rep = finite_diff_check(loss_fn, {&X}, tol);
  return {"row_l2_normalize(seed=" + std::to_string(seed_index) + ")", rep};
}

GradSuiteResult check_gcn_projection(std::size_t seed_index, real_t tol) {
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(mix_seed(0x9c47u, seed_index, attempt + 2));
    Matrix X = random_matrix(10, 6, rng);
    CsrAdjacency adj = random_normalized_adjacency(10, rng);
    GcnEncoder enc(6, 5, 4, mix_seed(0x9c47u, seed_index, attempt + 1000));
    Matrix R = random_matrix(10, 4, rng);

    GcnCache probe;
    gcn_forward(enc, adj, X, probe);
    if (min_abs(probe.U) < kKinkMargin) continue;

    auto loss_fn = [&]() -> real_t {
      GcnCache cache;
      Matrix H = gcn_forward(enc, adj, X, cache);
      real_t loss = 0;
      for (std::size_t i = 0; i < H.data.size(); ++i) loss += R.data[i] * H.data[i];
      enc.zero_grad();
      gcn_backward(enc, cache, R);
      return loss;
    };
    GradCheckReport rep = finite_diff_check(loss_fn, {&enc.W1, &enc.W2}, tol);
    return {"gcn_projection(seed=" + std::to_string(seed_index) + ")", rep};
  }
  throw NumericError("gradient suite: no well-conditioned gcn instance");
}

GradSuiteResult check_mlp_classifier(std::size_t seed_index, real_t tol) {
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(mix_seed(0x371Bu, seed_index, attempt + 2));
    std::size_t n = 9, d = 6, k = 3;
    Matrix H = random_matrix(n, d, rng);
    Matrix Y = row_softmax(random_matrix(n, k, rng));
    MlpClassifier clf(d, k, mix_seed(0x371Bu, seed_index, attempt + 1000), 8);

    MlpCache probe;
    mlp_forward(clf, H, probe);
    if (min_abs(probe.A) < kKinkMargin) continue;

    auto loss_fn = [&]() -> real_t {
      MlpCache cache;
      Matrix logits = mlp_forward(clf, H, cache);
      Matrix P = row_softmax(logits);
      real_t loss = 0;
      Matrix dlogits(n, k);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          loss -= Y(i, j) * std::log(std::max(P(i, j), real_t(1e-300)));
          dlogits(i, j) = (P(i, j) - Y(i, j)) / static_cast<real_t>(n);
        }
      }
      loss /= static_cast<real_t>(n);
      clf.zero_grad();
      mlp_backward(clf, cache, dlogits);
      return loss;
    };
    GradCheckReport rep = finite_diff_check(loss_fn, {&clf.W1, &clf.b1, &clf.W2, &clf.b2}, tol);
    return {"mlp_classifier(seed=" + std::to_string(seed_index) + ")", rep};
  }
  throw NumericError("gradient suite: no well-conditioned mlp instance");
}

GradSuiteResult check_infonce(std::size_t seed_index, real_t tol, bool strict) {
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(mix_seed(strict ? 0x1FCEu : 0x1FCFu, seed_index, attempt + 2));
    Param H1, H2;
    H1.value = random_matrix(8, 6, rng);
    H2.value = random_matrix(8, 6, rng);
    H1.grad = Matrix(8, 6);
    H2.grad = Matrix(8, 6);
    if (strict && min_abs_cosine(H1.value, H2.value) < kKinkMargin) continue;

    InfoNceOptions opts{strict, real_t(0.5)};
    auto loss_fn = [&]() -> real_t {
      LossOutput out = node_infonce(H1.value, H2.value, opts);
      H1.grad = std::move(out.dH1);
      H2.grad = std::move(out.dH2);
      return out.value;
    };
    GradCheckReport rep = finite_diff_check(loss_fn, {&H1, &H2}, tol);
    std::string name = strict ? "node_infonce_strict" : "node_infonce_conventional";
    return {name + "(seed=" + std::to_string(seed_index) + ")", rep};
  }
  throw NumericError("gradient suite: no well-conditioned infonce instance");
}

GradSuiteResult check_proto(std::size_t seed_index, real_t tol) {
  Rng rng(mix_seed(0x9607u, seed_index, 1));
  Param H;
  H.value = random_matrix(8, 6, rng);
  H.grad = Matrix(8, 6);
  Matrix C = random_matrix(3, 6, rng);
  std::vector<int> z = random_assignments(8, 3, rng);

  auto loss_fn = [&]() -> real_t {
    LossOutput out = proto_loss(H.value, C, z, real_t(0.5));
    H.grad = std::move(out.dH);
    return out.value;
  };
  GradCheckReport rep = finite_diff_check(loss_fn, {&H}, tol);
  return {"proto_loss(seed=" + std::to_string(seed_index) + ")", rep};
}

GradSuiteResult check_combined(std::size_t seed_index, real_t tol) {
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(mix_seed(0xC03Bu, seed_index, attempt + 2));
    Param H, H1, H2;
    H.value = random_matrix(8, 6, rng);
    H1.value = random_matrix(8, 6, rng);
    H2.value = random_matrix(8, 6, rng);
    H.grad = Matrix(8, 6);
    H1.grad = Matrix(8, 6);
    H2.grad = Matrix(8, 6);
    Matrix C = random_matrix(3, 6, rng);
    std::vector<int> z = random_assignments(8, 3, rng);
    if (min_abs_cosine(H1.value, H2.value) < kKinkMargin) continue;

    auto loss_fn = [&]() -> real_t {
      Matrix Hn = row_l2_normalize(H.value);
      LossOutput out = combined_loss(Hn, H1.value, H2.value, C, z, real_t(0.5));
      H.grad = row_l2_normalize_backward(H.value, out.dH);
      H1.grad = std::move(out.dH1);
      H2.grad = std::move(out.dH2);
      return out.value;
    };
    GradCheckReport rep = finite_diff_check(loss_fn, {&H, &H1, &H2}, tol);
    return {"combined_loss(seed=" + std::to_string(seed_index) + ")", rep};
  }
  throw NumericError("gradient suite: no well-conditioned combined instance");
}

/// The production gradient: encoder weights through three forward passes
/// (two augmented views into the node loss, the base view through row
/// normalization into the prototypical loss) with prototypes held constant.
GradSuiteResult check_end_to_end(std::size_t seed_index, real_t tol) {
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(mix_seed(0xE2Eu, seed_index, attempt + 2));
    std::size_t n = 9, d = 5, hidden = 5, emb = 4, k = 3;
    Matrix X0 = random_matrix(n, d, rng);
    Matrix X1 = random_matrix(n, d, rng);
    Matrix X2 = random_matrix(n, d, rng);
    CsrAdjacency A0 = random_normalized_adjacency(n, rng);
    CsrAdjacency A1 = random_normalized_adjacency(n, rng);
    CsrAdjacency A2 = random_normalized_adjacency(n, rng);
    GcnEncoder enc(d, hidden, emb, mix_seed(0xE2Eu, seed_index, attempt + 1000));
    Matrix C = random_matrix(k, emb, rng);
    std::vector<int> z = random_assignments(n, k, rng);

    GcnCache p0, p1, p2;
    Matrix Hp = gcn_forward(enc, A0, X0, p0);
    Matrix Hp1 = gcn_forward(enc, A1, X1, p1);
    Matrix Hp2 = gcn_forward(enc, A2, X2, p2);
    real_t margin = std::min({min_abs(p0.U), min_abs(p1.U), min_abs(p2.U),
                              min_abs_cosine(Hp1, Hp2)});
    if (margin < kKinkMargin) continue;

    InfoNceOptions opts;
    auto loss_fn = [&]() -> real_t {
      GcnCache c0, c1, c2;
      Matrix H = gcn_forward(enc, A0, X0, c0);
      Matrix H1 = gcn_forward(enc, A1, X1, c1);
      Matrix H2 = gcn_forward(enc, A2, X2, c2);
      Matrix Hn = row_l2_normalize(H);
      LossOutput out = combined_loss(Hn, H1, H2, C, z, real_t(0.5), opts);
      enc.zero_grad();
      gcn_backward(enc, c1, out.dH1);
      gcn_backward(enc, c2, out.dH2);
      gcn_backward(enc, c0, row_l2_normalize_backward(H, out.dH));
      return out.value;
    };
    GradCheckReport rep = finite_diff_check(loss_fn, {&enc.W1, &enc.W2}, tol);
    return {"encoder_end_to_end(seed=" + std::to_string(seed_index) + ")", rep};
  }
  throw NumericError("gradient suite: no well-conditioned end-to-end instance");
}

}  // namespace

std::vector<GradSuiteResult> run_gradient_suite(std::size_t seeds, real_t tol) {
  std::vector<GradSuiteResult> results;
  results.reserve(seeds * 8);
  for (std::size_t s = 0; s < seeds; ++s) {
    results.push_back(check_row_normalize(s, tol));
    results.push_back(check_gcn_projection(s, tol));
    results.push_back(check_mlp_classifier(s, tol));
    results.push_back(check_infonce(s, tol, true));
    results.push_back(check_infonce(s, tol, false));
    results.push_back(check_proto(s, tol));
    results.push_back(check_combined(s, tol));
    results.push_back(check_end_to_end(s, tol));
  }
  return results;
}

}  // namespace brgcl
