#include "brgcl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "brgcl/bpl.hpp"
#include "brgcl/rng.hpp"

namespace brgcl {

real_t classification_accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                               const std::vector<std::uint8_t>& mask) {
  if (pred.size() != truth.size() || pred.size() != mask.size()) {
    throw std::invalid_argument("classification_accuracy: input lengths differ");
  }
  std::size_t total = 0, correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!mask[i]) continue;
    ++total;
    correct += (pred[i] == truth[i]);
  }
  if (total == 0) throw std::invalid_argument("classification_accuracy: empty mask");
  return static_cast<real_t>(correct) / static_cast<real_t>(total);
}

std::vector<std::size_t> hungarian_min(const Matrix& cost) {
  if (cost.rows > cost.cols) {
    throw std::invalid_argument("hungarian_min: needs rows <= cols");
  }
  std::size_t n = cost.rows, m = cost.cols;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Potentials method over a 1-based virtual grid; p[j] is the row matched to
  // column j, column 0 is the staging slot.
  std::vector<double> u(n + 1, 0), v(m + 1, 0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = static_cast<double>(cost(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

namespace {

Matrix contingency_table(const std::vector<int>& a, const std::vector<int>& b) {
  int ka = 0, kb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) throw std::invalid_argument("cluster_eval: negative label id");
    ka = std::max(ka, a[i] + 1);
    kb = std::max(kb, b[i] + 1);
  }
  Matrix table(static_cast<std::size_t>(ka), static_cast<std::size_t>(kb));
  for (std::size_t i = 0; i < a.size(); ++i) {
    table(static_cast<std::size_t>(a[i]), static_cast<std::size_t>(b[i])) += real_t(1);
  }
  return table;
}

double matching_accuracy(const Matrix& table, std::size_t n) {
  const Matrix* t = &table;
  Matrix transposed;
  if (table.rows > table.cols) {
    transposed = transpose(table);
    t = &transposed;
  }
  Matrix cost = scale(*t, real_t(-1));
  std::vector<std::size_t> match = hungarian_min(cost);
  double matched = 0;
  for (std::size_t r = 0; r < t->rows; ++r) matched += static_cast<double>((*t)(r, match[r]));
  return matched / static_cast<double>(n);
}

double mutual_information_nmi(const Matrix& table, std::size_t n) {
  std::vector<double> row_sum(table.rows, 0), col_sum(table.cols, 0);
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      row_sum[i] += static_cast<double>(table(i, j));
      col_sum[j] += static_cast<double>(table(i, j));
    }
  }
  double nd = static_cast<double>(n);
  double hu = 0, hv = 0, mi = 0;
  for (double s : row_sum) {
    if (s > 0) hu -= (s / nd) * std::log(s / nd);
  }
  for (double s : col_sum) {
    if (s > 0) hv -= (s / nd) * std::log(s / nd);
  }
  if (hu == 0 || hv == 0) return 0;
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      double nij = static_cast<double>(table(i, j));
      if (nij == 0) continue;
      mi += (nij / nd) * std::log(nij * nd / (row_sum[i] * col_sum[j]));
    }
  }
  return mi / (0.5 * (hu + hv));
}

double adjusted_rand(const Matrix& table, std::size_t n) {
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::vector<double> row_sum(table.rows, 0), col_sum(table.cols, 0);
  double index = 0;
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      double nij = static_cast<double>(table(i, j));
      row_sum[i] += nij;
      col_sum[j] += nij;
      index += choose2(nij);
    }
  }
  double a = 0, b = 0;
  for (double s : row_sum) a += choose2(s);
  for (double s : col_sum) b += choose2(s);
  double total = choose2(static_cast<double>(n));
  double expected = a * b / total;
  double max_index = 0.5 * (a + b);
  if (max_index == expected) return 1.0;  // both partitions trivial and identical
  return (index - expected) / (max_index - expected);
}

}  // namespace

ClusterMetrics cluster_eval(const std::vector<int>& assignments, const std::vector<int>& truth,
                            std::size_t K) {
  if (assignments.size() != truth.size() || assignments.empty()) {
    throw std::invalid_argument("cluster_eval: labelings must cover the same nonempty node set");
  }
  for (int y : truth) {
    if (y < 0 || static_cast<std::size_t>(y) >= K) {
      throw std::invalid_argument("cluster_eval: truth label outside [0, K)");
    }
  }
  Matrix table = contingency_table(assignments, truth);
  std::size_t n = assignments.size();
  ClusterMetrics m;
  m.acc = static_cast<real_t>(matching_accuracy(table, n));
  m.nmi = static_cast<real_t>(mutual_information_nmi(table, n));
  m.ari = static_cast<real_t>(adjusted_rand(table, n));
  return m;
}

std::vector<int> kmeans_embed(const Matrix& H, std::size_t K, std::uint64_t seed,
                              std::size_t restarts) {
  if (K > H.rows) throw std::invalid_argument("kmeans_embed: K exceeds the number of rows");
  if (restarts < 1) throw std::invalid_argument("kmeans_embed: restarts must be >= 1");
  std::vector<int> best;
  real_t best_obj = std::numeric_limits<real_t>::max();
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<int> z = fixed_k_oracle(H, K, mix_seed(seed, r, 0xB5), 100);
    real_t obj = wcss(H, z, K);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(z);
    }
  }
  return best;
}

}  // namespace brgcl
