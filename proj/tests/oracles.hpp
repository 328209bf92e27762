// Test-only reference computations, independent of the library's solver
// path: a transportation-polytope vertex enumeration for small instances
// and the 1-D sorted-matching cost.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracles {

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace detail

/// Exact optimum of the balanced transportation LP by enumerating every
/// spanning-tree basis of the bipartite graph; each basis determines its
/// flows uniquely by leaf elimination, and every vertex of the polytope is
/// covered. Practical for n + m - 1 <= ~8 basic cells.
inline double brute_force_transport_cost(const std::vector<double>& cost, std::size_t n,
                                         std::size_t m, const std::vector<double>& supply,
                                         const std::vector<double>& demand) {
  const std::size_t cells = n * m;
  const std::size_t basis = n + m - 1;
  if (cells > 24) throw std::runtime_error("brute force oracle: instance too large");

  double best = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> pick(basis);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<int> degree(n + m);
  std::vector<double> residual(n + m);
  std::vector<char> removed(basis);
  std::vector<double> flow(basis);

  const auto advance = [&]() -> bool {
    // next lexicographic combination of `basis` cells out of `cells`
    std::size_t i = basis;
    while (i-- > 0) {
      if (pick[i] + (basis - i) < cells + 0) {
        ++pick[i];
        for (std::size_t j = i + 1; j < basis; ++j) pick[j] = pick[j - 1] + 1;
        return true;
      }
    }
    return false;
  };

  do {
    // spanning + acyclic check
    detail::UnionFind uf(n + m);
    bool tree = true;
    for (std::size_t t = 0; t < basis && tree; ++t) {
      const std::size_t i = pick[t] / m;
      const std::size_t j = pick[t] % m;
      tree = uf.merge(static_cast<int>(i), static_cast<int>(n + j));
    }
    if (!tree) continue;  // basis merges n+m-1 times iff it spans all nodes

    std::fill(degree.begin(), degree.end(), 0);
    for (std::size_t t = 0; t < basis; ++t) {
      ++degree[pick[t] / m];
      ++degree[n + pick[t] % m];
    }
    for (std::size_t i = 0; i < n; ++i) residual[i] = supply[i];
    for (std::size_t j = 0; j < m; ++j) residual[n + j] = demand[j];
    std::fill(removed.begin(), removed.end(), 0);

    // leaf elimination: a degree-1 node pins the flow of its last cell
    for (std::size_t step = 0; step < basis; ++step) {
      std::size_t leaf = n + m;
      for (std::size_t v = 0; v < n + m; ++v) {
        if (degree[v] == 1) {
          leaf = v;
          break;
        }
      }
      if (leaf == n + m) break;  // should not happen on a tree
      for (std::size_t t = 0; t < basis; ++t) {
        if (removed[t]) continue;
        const std::size_t i = pick[t] / m;
        const std::size_t j = n + pick[t] % m;
        if (i != leaf && j != leaf) continue;
        const std::size_t other = i == leaf ? j : i;
        flow[t] = residual[leaf];
        residual[other] -= residual[leaf];
        residual[leaf] = 0.0;
        removed[t] = 1;
        --degree[i == leaf ? i : j];
        --degree[other];
        break;
      }
    }

    bool feasible = true;
    double total = 0.0;
    for (std::size_t t = 0; t < basis; ++t) {
      if (!removed[t] || flow[t] < -1e-12) {
        feasible = false;
        break;
      }
      total += cost[pick[t]] * flow[t];
    }
    if (feasible && total < best) best = total;
  } while (advance());

  if (!std::isfinite(best)) throw std::runtime_error("brute force oracle: no feasible vertex");
  return best;
}

/// Optimal 1-D cost for equal-size uniform distributions: the monotone
/// (sorted) matching.
inline double sorted_matching_cost_1d(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size()) throw std::runtime_error("sorted matching oracle: size mismatch");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    total += (xs[i] - ys[i]) * (xs[i] - ys[i]);
  }
  return total / static_cast<double>(xs.size());
}

}  // namespace oracles
