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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fairot/detail/dense_simplex.hpp"
#include "fairot/detail/numeric.hpp"
#include "fairot/discrete_distribution.hpp"
#include "fairot/errors.hpp"
#include "fairot/transport.hpp"

namespace fairot {

/// Default cap on the tuple space of the exact barycenter solver.
inline constexpr std::size_t kDefaultOracleCap = 100000;

/// Output of the pairwise-transport barycenter approximation.
///
/// The barycenter stacks, group by group, the mapped point of every input
/// support; the point contributed by support i of group s carries weight
/// p_s * w_i^s (p_s / n_s for uniform groups) and is also recorded in
/// per_group_targets[s], row i.
struct BarycenterResult {
  DiscreteDistribution barycenter;
  std::vector<std::vector<double>> per_group_targets;  // flat n_s * k per group
  std::vector<double> group_weights;
};

namespace detail {

inline std::vector<double> normalized_group_weights(std::vector<double> weights,
                                                    std::size_t expected) {
  if (weights.size() != expected) {
    throw InputError("barycenter: expected " + std::to_string(expected) + " group weights, got " +
                     std::to_string(weights.size()));
  }
  NeumaierSum total;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InputError("barycenter: group weights must be positive and finite");
    }
    total.add(w);
  }
  const double mass = total.value();
  if (std::abs(mass - 1.0) > 1e-9) {
    throw InputError("barycenter: group weights sum to " + std::to_string(mass));
  }
  for (double& w : weights) w /= mass;
  return weights;
}

inline std::size_t common_dimension(const std::vector<DiscreteDistribution>& groups) {
  if (groups.empty()) throw InputError("barycenter: no groups given");
  const std::size_t k = groups.front().dimension();
  for (const auto& g : groups) {
    if (g.dimension() != k) throw InputError("barycenter: groups have mixed dimensions");
  }
  return k;
}

/// Overflow-safe test of prod(group sizes) > cap.
inline bool tuple_space_exceeds(const std::vector<DiscreteDistribution>& groups,
                                std::size_t cap) {
  std::size_t tuples = 1;
  for (const auto& g : groups) {
    if (tuples > cap / g.size()) return true;
    tuples *= g.size();
    if (tuples > cap) return true;
  }
  return false;
}

}  // namespace detail

/// Weights proportional to group sizes, the default weighting for
/// empirical groups.
inline std::vector<double> size_proportional_weights(const std::vector<DiscreteDistribution>& groups) {
  std::size_t total = 0;
  for (const auto& g : groups) total += g.size();
  std::vector<double> w(groups.size());
  for (std::size_t s = 0; s < groups.size(); ++s) {
    w[s] = static_cast<double>(groups[s].size()) / static_cast<double>(total);
  }
  return w;
}

/// Pairwise-transport approximation of the weighted barycenter: solves one
/// optimal plan per unordered group pair, maps every support to the
/// weighted average of its expected images in all groups (a point
/// transported within its own group contributes itself), and returns the
/// stacked mapped points as a discrete distribution.
inline BarycenterResult approximate_barycenter(const std::vector<DiscreteDistribution>& groups,
                                               std::vector<double> weights) {
  const std::size_t k = detail::common_dimension(groups);
  const std::size_t m = groups.size();
  std::vector<double> p = detail::normalized_group_weights(std::move(weights), m);

  // Expected image of every source point under each pairwise plan, both
  // directions read off the same solve.
  std::vector<std::vector<std::vector<double>>> expected(m,
                                                         std::vector<std::vector<double>>(m));
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t t = s + 1; t < m; ++t) {
      const TransportPlan plan = solve_transport(groups[s], groups[t]);
      expected[s][t] = barycentric_map(plan, groups[t]);
      expected[t][s] = barycentric_map_reverse(plan, groups[s]);
    }
  }

  BarycenterResult result{groups.front(), {}, p};
  result.per_group_targets.resize(m);
  std::vector<double> flat;
  std::vector<double> bary_weights;
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t n = groups[s].size();
    std::vector<double>& targets = result.per_group_targets[s];
    targets.assign(n * k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double* row = targets.data() + i * k;
      const auto self = groups[s].point(i);
      for (std::size_t d = 0; d < k; ++d) row[d] = p[s] * self[d];
      for (std::size_t t = 0; t < m; ++t) {
        if (t == s) continue;
        const double* img = expected[s][t].data() + i * k;
        for (std::size_t d = 0; d < k; ++d) row[d] += p[t] * img[d];
      }
    }
    flat.insert(flat.end(), targets.begin(), targets.end());
    for (std::size_t i = 0; i < n; ++i) bary_weights.push_back(p[s] * groups[s].weights()[i]);
  }
  result.barycenter = DiscreteDistribution(std::move(flat), k, std::move(bary_weights));
  return result;
}

/// The weighted barycenter objective: sum_s p_s * W2^2(group_s, candidate).
inline double barycenter_objective(const DiscreteDistribution& candidate,
                                   const std::vector<DiscreteDistribution>& groups,
                                   std::vector<double> weights) {
  detail::common_dimension(groups);
  if (candidate.dimension() != groups.front().dimension()) {
    throw InputError("barycenter_objective: candidate dimension mismatch");
  }
  const std::vector<double> p = detail::normalized_group_weights(std::move(weights), groups.size());
  detail::NeumaierSum obj;
  for (std::size_t s = 0; s < groups.size(); ++s) {
    obj.add(p[s] * w2_squared(groups[s], candidate));
  }
  return obj.value();
}

/// Exact barycenter via the tuple-indexed transport linear program. Every
/// tuple takes one support per group; a tuple with optimal mass contributes
/// a barycenter support at the weight-averaged position of its points. The
/// tuple space must stay at or below `cap`: beyond it the call is refused
/// outright, it never falls back to the approximation. Intended for tests
/// and small instances.
inline DiscreteDistribution exact_barycenter_oracle(const std::vector<DiscreteDistribution>& groups,
                                                    std::vector<double> weights,
                                                    std::size_t cap = kDefaultOracleCap) {
  const std::size_t k = detail::common_dimension(groups);
  const std::size_t m = groups.size();
  const std::vector<double> p = detail::normalized_group_weights(std::move(weights), m);

  if (detail::tuple_space_exceeds(groups, cap)) {
    throw InputError("exact_barycenter_oracle: tuple space exceeds cap of " + std::to_string(cap));
  }

  if (m == 1) return groups.front();

  if (m == 2) {
    // Two groups: the tuple program is exactly the pairwise transport
    // problem, so solve it through the transportation specialization.
    const TransportPlan plan = solve_transport(groups[0], groups[1]);
    std::vector<double> flat;
    std::vector<double> w;
    for (std::size_t i = 0; i < plan.n_src(); ++i) {
      const auto a = groups[0].point(i);
      for (std::size_t j = 0; j < plan.n_dst(); ++j) {
        const double g = plan.at(i, j);
        if (g <= 1e-12) continue;
        const auto b = groups[1].point(j);
        for (std::size_t d = 0; d < k; ++d) flat.push_back(p[0] * a[d] + p[1] * b[d]);
        w.push_back(g);
      }
    }
    return DiscreteDistribution(std::move(flat), k, std::move(w));
  }

  std::size_t tuples = 1;
  for (const auto& g : groups) tuples *= g.size();

  // Marginal constraints: one row per (group, support index).
  std::size_t rows = 0;
  std::vector<std::size_t> row_offset(m);
  for (std::size_t s = 0; s < m; ++s) {
    row_offset[s] = rows;
    rows += groups[s].size();
  }

  std::vector<double> a(rows * tuples, 0.0);
  std::vector<double> b(rows, 0.0);
  std::vector<double> cost(tuples, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t i = 0; i < groups[s].size(); ++i) {
      b[row_offset[s] + i] = groups[s].weights()[i];
    }
  }

  std::vector<std::size_t> index(m, 0);
  std::vector<double> mean(k);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::fill(mean.begin(), mean.end(), 0.0);
    for (std::size_t s = 0; s < m; ++s) {
      const auto pt = groups[s].point(index[s]);
      for (std::size_t d = 0; d < k; ++d) mean[d] += p[s] * pt[d];
      a[(row_offset[s] + index[s]) * tuples + t] = 1.0;
    }
    double c = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      c += p[s] * detail::squared_distance(groups[s].point(index[s]), mean);
    }
    cost[t] = c;
    for (std::size_t s = m; s-- > 0;) {  // odometer, last group fastest
      if (++index[s] < groups[s].size()) break;
      index[s] = 0;
    }
  }

  const auto lp = detail::DenseSimplex::minimize(a, rows, tuples, b, cost);

  std::vector<double> flat;
  std::vector<double> w;
  std::fill(index.begin(), index.end(), 0);
  for (std::size_t t = 0; t < tuples; ++t) {
    if (lp.x[t] > 1e-12) {
      std::fill(mean.begin(), mean.end(), 0.0);
      for (std::size_t s = 0; s < m; ++s) {
        const auto pt = groups[s].point(index[s]);
        for (std::size_t d = 0; d < k; ++d) mean[d] += p[s] * pt[d];
      }
      flat.insert(flat.end(), mean.begin(), mean.end());
      w.push_back(lp.x[t]);
    }
    for (std::size_t s = m; s-- > 0;) {
      if (++index[s] < groups[s].size()) break;
      index[s] = 0;
    }
  }
  return DiscreteDistribution(std::move(flat), k, std::move(w));
}

}  // namespace fairot
