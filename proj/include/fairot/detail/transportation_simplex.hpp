// Copyright 2026 The fairot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "fairot/detail/numeric.hpp"
#include "fairot/errors.hpp"

namespace fairot::detail {

// Network simplex for the dense balanced transportation problem
//
//   min  sum_ij c[i][j] x[i][j]
//   s.t. sum_j x[i][j] = supply[i]   for every source i
//        sum_i x[i][j] = demand[j]   for every sink j
//        x >= 0
//
// with sum(supply) == sum(demand). The basis is a spanning tree over the
// n + m bipartite nodes plus an artificial root connected by big-M arcs
// (source -> root, root -> sink), so the initial star tree is feasible for
// any balanced instance. Entering arcs are picked by block search over the
// dense arc set; the leaving arc is the last blocking arc met when walking
// the cycle from its apex in the direction of the entering arc, which keeps
// the tree strongly feasible and rules out cycling on the heavily
// degenerate bases transportation instances produce.
class TransportationSimplex {
 public:
  TransportationSimplex(std::span<const double> cost, std::size_t n_src, std::size_t n_dst,
                        std::span<const double> supply, std::span<const double> demand)
      : cost_(cost), n_(n_src), m_(n_dst),
        supply_(supply.begin(), supply.end()), demand_(demand.begin(), demand.end()) {
    const std::size_t nodes = n_ + m_ + 1;
    root_ = static_cast<int>(n_ + m_);
    parent_.assign(nodes, root_);
    pred_flow_.assign(nodes, 0.0);
    pred_to_parent_.assign(nodes, false);
    depth_.assign(nodes, 1);
    pi_.assign(nodes, 0.0);
    children_.assign(nodes, {});
    depth_[root_] = 0;

    const double cmax = *std::max_element(cost_.begin(), cost_.end());
    art_cost_ = (cmax + 1.0) * static_cast<double>(nodes);
    // Entering threshold: scaled so that rounding noise in c + pi_u - pi_v
    // (potentials can be of magnitude art_cost_) is never treated as a
    // profitable arc.
    opt_tol_ = std::max(1e-12 * (1.0 + cmax), 64.0 * std::numeric_limits<double>::epsilon() * art_cost_);

    children_[root_].reserve(nodes - 1);
    for (std::size_t i = 0; i < n_; ++i) {
      pred_flow_[i] = supply[i];
      pred_to_parent_[i] = true;  // arc i -> root
      pi_[i] = -art_cost_;
      children_[root_].push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < m_; ++j) {
      const std::size_t v = n_ + j;
      pred_flow_[v] = demand[j];
      pred_to_parent_[v] = false;  // arc root -> (n + j)
      pi_[v] = art_cost_;
      children_[root_].push_back(static_cast<int>(v));
    }

    const std::size_t arcs = n_ * m_;
    block_size_ = std::max<std::size_t>(64, static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs))));
    block_size_ = std::min(block_size_, arcs);
  }

  /// Runs pivots to optimality and returns the objective value.
  double solve() {
    const std::size_t max_pivots = 1000 * (n_ + m_ + 1) + 100000;
    std::size_t pivots = 0;
    int i, j;
    while (find_entering(i, j)) {
      pivot(i, j);
      if (++pivots > max_pivots) {
        throw InfeasibleError("transport solver exceeded its pivot budget");
      }
    }
    // Artificial arcs must end up empty; a balanced instance guarantees it.
    for (std::size_t v = 0; v < n_ + m_; ++v) {
      if (parent_[v] == root_ && pred_flow_[v] > 1e-7) {
        throw InfeasibleError("transport solver left mass on an artificial arc");
      }
    }
    recompute_tree_flows();
    NeumaierSum obj;
    for (std::size_t v = 0; v < n_ + m_; ++v) {
      const int p = parent_[v];
      if (p == root_) continue;
      const std::size_t row = v < n_ ? v : static_cast<std::size_t>(p);
      const std::size_t col = (v < n_ ? static_cast<std::size_t>(p) : v) - n_;
      obj.add(cost_[row * m_ + col] * pred_flow_[v]);
    }
    return obj.value();
  }

  /// Writes the optimal coupling into `gamma` (n_src * n_dst, row-major).
  void extract_flow(std::vector<double>& gamma) const {
    gamma.assign(n_ * m_, 0.0);
    for (std::size_t v = 0; v < n_ + m_; ++v) {
      const int p = parent_[v];
      if (p == root_) continue;
      const std::size_t row = v < n_ ? v : static_cast<std::size_t>(p);
      const std::size_t col = (v < n_ ? static_cast<std::size_t>(p) : v) - n_;
      gamma[row * m_ + col] = std::max(0.0, pred_flow_[v]);
    }
  }

 private:
  bool find_entering(int& out_i, int& out_j) {
    const std::size_t arcs = n_ * m_;
    double best = -opt_tol_;
    std::size_t best_arc = arcs;
    std::size_t scanned = 0;
    std::size_t a = next_arc_;
    while (scanned < arcs) {
      const std::size_t i = a / m_;
      const std::size_t j = a % m_;
      const double rc = cost_[a] + pi_[i] - pi_[n_ + j];
      if (rc < best) {
        best = rc;
        best_arc = a;
      }
      ++scanned;
      ++a;
      if (a == arcs) a = 0;
      if (scanned % block_size_ == 0 && best_arc != arcs) break;
    }
    if (best_arc == arcs) return false;
    next_arc_ = (best_arc + 1) % arcs;
    out_i = static_cast<int>(best_arc / m_);
    out_j = static_cast<int>(best_arc % m_);
    return true;
  }

  void pivot(int i, int j) {
    const int u = i;                 // tail (source node)
    const int v = static_cast<int>(n_) + j;  // head (sink node)

    // Tree paths from both endpoints up to their common ancestor.
    tail_path_.clear();
    head_path_.clear();
    {
      int a = u, b = v;
      while (depth_[a] > depth_[b]) {
        tail_path_.push_back(a);
        a = parent_[a];
      }
      while (depth_[b] > depth_[a]) {
        head_path_.push_back(b);
        b = parent_[b];
      }
      while (a != b) {
        tail_path_.push_back(a);
        head_path_.push_back(b);
        a = parent_[a];
        b = parent_[b];
      }
    }

    // The cycle is traversed apex -> ... -> u -> (entering) -> v -> ... -> apex.
    // On the tail side an arc stored at x is against the traversal iff it is
    // directed x -> parent; on the head side iff it is directed parent -> y.
    // theta is the smallest flow on an against-traversal arc; the leaving arc
    // is the *last* one attaining it in traversal order (strong feasibility).
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    bool leave_on_tail = false;
    for (std::size_t t = tail_path_.size(); t-- > 0;) {
      const int x = tail_path_[t];
      if (pred_to_parent_[x] && pred_flow_[x] <= theta) {
        theta = pred_flow_[x];
        leave = x;
        leave_on_tail = true;
      }
    }
    for (const int y : head_path_) {
      if (!pred_to_parent_[y] && pred_flow_[y] <= theta) {
        theta = pred_flow_[y];
        leave = y;
        leave_on_tail = false;
      }
    }
    if (leave < 0) {
      throw InfeasibleError("transport solver found an unbounded cycle");
    }

    // Push theta around the cycle.
    if (theta != 0.0) {
      for (const int x : tail_path_) pred_flow_[x] += pred_to_parent_[x] ? -theta : theta;
      for (const int y : head_path_) pred_flow_[y] += pred_to_parent_[y] ? theta : -theta;
    }

    const double rc = cost_[static_cast<std::size_t>(i) * m_ + j] + pi_[u] - pi_[v];

    // Reattach the subtree cut off by the leaving arc: re-root it at the
    // entering arc's endpoint inside that subtree and hang it off the other.
    const int q = leave_on_tail ? u : v;
    const int attach = leave_on_tail ? v : u;

    path_buf_.clear();
    for (int x = q;; x = parent_[x]) {
      path_buf_.push_back(x);
      if (x == leave) break;
    }
    detach_child(parent_[leave], leave);
    for (std::size_t t = path_buf_.size() - 1; t-- > 0;) {
      const int child_new = path_buf_[t + 1];
      const int parent_new = path_buf_[t];
      detach_child(child_new, parent_new);
      parent_[child_new] = parent_new;
      children_[parent_new].push_back(child_new);
      pred_to_parent_[child_new] = !pred_to_parent_[parent_new];
      pred_flow_[child_new] = pred_flow_[parent_new];
    }
    parent_[q] = attach;
    children_[attach].push_back(q);
    pred_to_parent_[q] = (q == u);
    pred_flow_[q] = theta;

    // Potentials in the reattached subtree shift by a constant so the
    // entering arc prices to zero; depths follow the new parents.
    const double delta = (q == u) ? -rc : rc;
    dfs_stack_.clear();
    dfs_stack_.push_back(q);
    while (!dfs_stack_.empty()) {
      const int x = dfs_stack_.back();
      dfs_stack_.pop_back();
      pi_[x] += delta;
      depth_[x] = depth_[parent_[x]] + 1;
      for (const int c : children_[x]) dfs_stack_.push_back(c);
    }
  }

  void detach_child(int parent, int child) {
    auto& kids = children_[parent];
    for (std::size_t t = 0; t < kids.size(); ++t) {
      if (kids[t] == child) {
        kids[t] = kids.back();
        kids.pop_back();
        return;
      }
    }
  }

  // Rederives every tree flow from the original marginals by leaf
  // elimination, which clears the rounding drift accumulated over cycle
  // updates.
  void recompute_tree_flows() {
    const std::size_t nodes = n_ + m_ + 1;
    // residual[v] = mass that must leave v toward the rest of the tree
    // (negative when mass must arrive).
    std::vector<double> residual(nodes, 0.0);
    for (std::size_t i = 0; i < n_; ++i) residual[i] = supply_[i];
    for (std::size_t j = 0; j < m_; ++j) residual[n_ + j] = -demand_[j];

    order_buf_.clear();
    dfs_stack_.clear();
    dfs_stack_.push_back(root_);
    while (!dfs_stack_.empty()) {
      const int x = dfs_stack_.back();
      dfs_stack_.pop_back();
      order_buf_.push_back(x);
      for (const int c : children_[x]) dfs_stack_.push_back(c);
    }
    for (std::size_t t = order_buf_.size(); t-- > 0;) {
      const int x = order_buf_[t];
      if (x == root_) continue;
      // Flow on the arc between x and parent equals the subtree imbalance,
      // signed by the arc orientation.
      const double f = pred_to_parent_[x] ? residual[x] : -residual[x];
      pred_flow_[x] = std::max(0.0, f);
      residual[parent_[x]] += residual[x];
    }
  }

  std::span<const double> cost_;
  std::size_t n_, m_;
  std::vector<double> supply_, demand_;
  int root_;
  double art_cost_ = 0.0;
  double opt_tol_ = 0.0;
  std::size_t block_size_ = 64;
  std::size_t next_arc_ = 0;

  std::vector<int> parent_;
  std::vector<double> pred_flow_;
  std::vector<char> pred_to_parent_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<std::vector<int>> children_;

  std::vector<int> tail_path_, head_path_, path_buf_, dfs_stack_, order_buf_;
};

}  // namespace fairot::detail
