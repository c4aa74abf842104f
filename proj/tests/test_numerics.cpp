#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "brgcl/gradcheck.hpp"
#include "brgcl/matrix.hpp"
#include "brgcl/param.hpp"
#include "brgcl/rng.hpp"

using namespace brgcl;

TEST_CASE("splitmix64 produces the published reference stream") {
  // First three outputs for state 0, from the reference implementation.
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(s) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64(s) == 0x06C45D188009454FULL);
}

TEST_CASE("mix_seed separates streams and is reproducible") {
  CHECK(mix_seed(7, 0, 0) == mix_seed(7, 0, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) seen.insert(mix_seed(42, a, b));
  }
  CHECK(seen.size() == 64);
}

TEST_CASE("uniform stays in [0,1) and matches its own replay") {
  Rng r1(123), r2(123);
  for (int i = 0; i < 1000; ++i) {
    double x = r1.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(x == r2.uniform());
  }
}

TEST_CASE("uniform_int covers [0,n) uniformly enough") {
  Rng r(5);
  std::vector<std::size_t> counts(10, 0);
  for (int i = 0; i < 100000; ++i) counts[r.uniform_int(10)] += 1;
  for (std::size_t c : counts) {
    CHECK(c > 9200);
    CHECK(c < 10800);
  }
}

TEST_CASE("normal has near-standard moments") {
  Rng r(11);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    sum += x;
    sq += x * x;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("shuffle is a permutation and deterministic") {
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  Rng r1(9), r2(9);
  std::vector<int> a = v, b = v;
  r1.shuffle(a);
  r2.shuffle(b);
  CHECK(a == b);
  CHECK(a != v);  // astronomically unlikely to be identity
  std::set<int> s(a.begin(), a.end());
  CHECK(s.size() == 50);
}

TEST_CASE("matmul matches the naive triple loop") {
  Rng r(3);
  Matrix a(7, 5), b(5, 9);
  for (real_t& x : a.data) x = static_cast<real_t>(r.normal());
  for (real_t& x : b.data) x = static_cast<real_t>(r.normal());
  a(2, 3) = 0;
  a(6, 0) = 0;  // exercise the zero-skip path
  Matrix c = matmul(a, b);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      real_t want = 0;
      for (std::size_t k = 0; k < 5; ++k) want += a(i, k) * b(k, j);
      CHECK(c(i, j) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("matmul_abt and matmul_atb agree with matmul over a transpose") {
  Rng r(4);
  Matrix a(6, 4), b(8, 4), c(6, 5);
  for (real_t& x : a.data) x = static_cast<real_t>(r.normal());
  for (real_t& x : b.data) x = static_cast<real_t>(r.normal());
  for (real_t& x : c.data) x = static_cast<real_t>(r.normal());

  Matrix abt = matmul_abt(a, b);
  Matrix abt_ref = matmul(a, transpose(b));
  REQUIRE(abt.same_shape(abt_ref));
  for (std::size_t i = 0; i < abt.size(); ++i) {
    CHECK(abt.data[i] == doctest::Approx(abt_ref.data[i]).epsilon(1e-12));
  }

  Matrix atb = matmul_atb(a, c);
  Matrix atb_ref = matmul(transpose(a), c);
  REQUIRE(atb.same_shape(atb_ref));
  for (std::size_t i = 0; i < atb.size(); ++i) {
    CHECK(atb.data[i] == doctest::Approx(atb_ref.data[i]).epsilon(1e-12));
  }
}

TEST_CASE("matmul rejects mismatched shapes with both shapes named") {
  Matrix a(2, 3), b(4, 2);
  CHECK_THROWS_WITH_AS(matmul(a, b), "matmul: dimension mismatch (2x3 vs 4x2)", DimensionError);
}

TEST_CASE("row_softmax rows are simplex vectors and shift-invariant") {
  Matrix a(2, 3, {1, 2, 3, 1000, 1001, 1002});
  Matrix s = row_softmax(a);
  for (std::size_t i = 0; i < 2; ++i) {
    real_t sum = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(s(i, j) > 0);
      sum += s(i, j);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // same logits up to a constant shift -> same softmax, no overflow
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(s(0, j) == doctest::Approx(s(1, j)).epsilon(1e-12));
  }
}

TEST_CASE("row_l2_normalize produces unit rows and passes zero rows through") {
  Matrix a(2, 2, {3, 4, 0, 0});
  Matrix n = row_l2_normalize(a);
  CHECK(n(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(n(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(n(1, 0) == 0.0);
  CHECK(n(1, 1) == 0.0);
}

TEST_CASE("relu_backward gates by the pre-activation sign") {
  Matrix pre(1, 4, {-1, 0, 2, 5});
  Matrix dy(1, 4, {10, 10, 10, 10});
  Matrix dx = relu_backward(pre, dy);
  CHECK(dx(0, 0) == 0);
  CHECK(dx(0, 1) == 0);  // the kink itself uses the zero subgradient
  CHECK(dx(0, 2) == 10);
  CHECK(dx(0, 3) == 10);
}

TEST_CASE("adam first two steps match the hand-computed update") {
  // w0 = 0, g = 1 every step, lr = 0.01: bias correction makes each early
  // step very close to -lr * sign(g).
  Param p(1, 1);
  p.value(0, 0) = 0;
  AdamState st(1, 1, real_t(0.01));
  p.grad(0, 0) = 1;
  adam_step(p, st);
  CHECK(p.value(0, 0) == doctest::Approx(-0.01).epsilon(1e-9));
  p.grad(0, 0) = 1;
  adam_step(p, st);
  CHECK(p.value(0, 0) == doctest::Approx(-0.02).epsilon(1e-7));
  CHECK(st.step == 2);
  CHECK(p.grad(0, 0) == 1);  // gradient is caller-owned
}

TEST_CASE("adam rejects non-finite gradients with the parameter named") {
  Param p(1, 1);
  AdamState st(1, 1);
  p.grad(0, 0) = std::numeric_limits<real_t>::quiet_NaN();
  CHECK_THROWS_WITH_AS(adam_step(p, st, "W1"), "adam_step(W1): non-finite gradient",
                       NumericError);
}

TEST_CASE("glorot init is bounded by the fan limit and seed-stable") {
  Param p(30, 20), q(30, 20);
  Rng r1(77), r2(77);
  p.glorot_init(r1);
  q.glorot_init(r2);
  CHECK(p.value.data == q.value.data);
  real_t limit = std::sqrt(real_t(6) / real_t(30 + 20));
  for (real_t x : p.value.data) {
    CHECK(std::abs(x) <= limit);
  }
}

TEST_CASE("finite_diff_check accepts a correct gradient and flags a wrong one") {
  Param p(2, 2);
  Rng r(13);
  for (real_t& x : p.value.data) x = static_cast<real_t>(r.normal());

  // loss = sum of squares; gradient 2x
  auto good = [&]() {
    real_t loss = 0;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      loss += p.value.data[i] * p.value.data[i];
      p.grad.data[i] = 2 * p.value.data[i];
    }
    return loss;
  };
  GradCheckReport rep = finite_diff_check(good, {&p}, real_t(1e-6));
  CHECK(rep.passed);
  CHECK(rep.max_rel_err < 1e-6);

  auto bad = [&]() {
    real_t loss = 0;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      loss += p.value.data[i] * p.value.data[i];
      p.grad.data[i] = 3 * p.value.data[i];  // deliberately wrong
    }
    return loss;
  };
  GradCheckReport rep2 = finite_diff_check(bad, {&p}, real_t(1e-6));
  CHECK(!rep2.passed);
}

TEST_CASE("finite_diff_check restores parameter values") {
  Param p(2, 3);
  Rng r(15);
  for (real_t& x : p.value.data) x = static_cast<real_t>(r.normal());
  std::vector<real_t> before = p.value.data;
  auto fn = [&]() {
    real_t loss = 0;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      loss += p.value.data[i];
      p.grad.data[i] = 1;
    }
    return loss;
  };
  finite_diff_check(fn, {&p}, real_t(1e-6));
  CHECK(p.value.data == before);
}

TEST_CASE("gradient suite passes across seeds at 1e-4") {
  auto results = run_gradient_suite(3, real_t(1e-4));
  CHECK(results.size() == 24);
  for (const auto& r : results) {
    INFO(r.name, " max_rel_err=", r.report.max_rel_err);
    CHECK(r.report.passed);
  }
}

TEST_CASE("require_finite names its context") {
  Matrix m(1, 2, {1, std::numeric_limits<real_t>::infinity()});
  CHECK_THROWS_AS(require_finite(m, "unit"), NumericError);
}
