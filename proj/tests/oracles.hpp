#pragma once

// Deliberately naive reference implementations the tests compare the library
// against. Everything here favors obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace oracles {

inline std::vector<std::vector<std::size_t>> contingency(const std::vector<int>& u,
                                                         const std::vector<int>& v) {
  int ku = 0, kv = 0;
  for (int x : u) ku = std::max(ku, x + 1);
  for (int x : v) kv = std::max(kv, x + 1);
  std::vector<std::vector<std::size_t>> t(static_cast<std::size_t>(ku),
                                          std::vector<std::size_t>(static_cast<std::size_t>(kv), 0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    t[static_cast<std::size_t>(u[i])][static_cast<std::size_t>(v[i])] += 1;
  }
  return t;
}

/// Adjusted Rand index by explicit pair counting over all element pairs.
inline double brute_ari(const std::vector<int>& u, const std::vector<int>& v) {
  double ss = 0, sd = 0, ds = 0, dd = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      bool su = u[i] == u[j];
      bool sv = v[i] == v[j];
      if (su && sv) ss += 1;
      else if (su && !sv) sd += 1;
      else if (!su && sv) ds += 1;
      else dd += 1;
    }
  }
  double denom = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
  if (denom == 0) return 1.0;  // chance-level equals the index: identical trivial partitions
  return 2.0 * (ss * dd - sd * ds) / denom;
}

/// Normalized mutual information from direct entropy sums, arithmetic-mean
/// normalization, degenerate sides defined as 0.
inline double brute_nmi(const std::vector<int>& u, const std::vector<int>& v) {
  auto t = contingency(u, v);
  double n = static_cast<double>(u.size());
  std::vector<double> row(t.size(), 0), col(t.empty() ? 0 : t[0].size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      row[i] += static_cast<double>(t[i][j]);
      col[j] += static_cast<double>(t[i][j]);
    }
  }
  auto entropy = [n](const std::vector<double>& counts) {
    double h = 0;
    for (double c : counts) {
      if (c > 0) h -= (c / n) * std::log(c / n);
    }
    return h;
  };
  double hu = entropy(row), hv = entropy(col);
  if (hu == 0 || hv == 0) return 0.0;
  double joint = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      double c = static_cast<double>(t[i][j]);
      if (c > 0) joint -= (c / n) * std::log(c / n);
    }
  }
  double mi = hu + hv - joint;
  return mi / ((hu + hv) / 2.0);
}

/// Best one-to-one cluster-to-class matching accuracy by enumerating every
/// permutation of the larger id set. Exponential; keep the id counts small.
inline double brute_acc(const std::vector<int>& u, const std::vector<int>& v) {
  auto t = contingency(u, v);
  std::size_t ku = t.size();
  std::size_t kv = t.empty() ? 0 : t[0].size();
  bool u_small = ku <= kv;
  std::size_t small = u_small ? ku : kv;
  std::size_t large = u_small ? kv : ku;
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t s = 0; s < small; ++s) {
      hit += u_small ? t[s][perm[s]] : t[perm[s]][s];
    }
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(u.size());
}

/// All set partitions of {0..n-1} as restricted growth strings.
inline std::vector<std::vector<int>> all_partitions(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> z(n, 0);
  auto rec = [&](auto&& self, std::size_t i, int max_used) -> void {
    if (i == n) {
      out.push_back(z);
      return;
    }
    for (int c = 0; c <= max_used + 1; ++c) {
      z[i] = c;
      self(self, i + 1, std::max(max_used, c));
    }
  };
  if (n > 0) rec(rec, 1, 0);  // z[0] = 0 fixed by symmetry
  return out;
}

/// Minimum assignment cost by enumerating all row-to-column injections.
inline double brute_assignment_cost(const std::vector<std::vector<double>>& cost) {
  std::size_t rows = cost.size();
  std::size_t cols = cost.empty() ? 0 : cost[0].size();
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0;
    for (std::size_t r = 0; r < rows; ++r) c += cost[r][perm[r]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracles
