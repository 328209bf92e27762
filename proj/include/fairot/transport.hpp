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

#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

#include "fairot/detail/numeric.hpp"
#include "fairot/detail/rng.hpp"
#include "fairot/detail/transportation_simplex.hpp"
#include "fairot/discrete_distribution.hpp"
#include "fairot/errors.hpp"

namespace fairot {

/// Optimal coupling between two discrete distributions: a nonnegative
/// matrix whose row sums equal the source weights and whose column sums
/// equal the target weights, together with its squared-distance cost.
///
/// Only the cost is unique; when the optimum is degenerate any optimal
/// vertex may be returned.
struct TransportPlan {
  std::vector<double> gamma;  // row-major, n_src * n_dst
  std::vector<double> source_weights;
  std::vector<double> target_weights;
  double cost = 0.0;

  std::size_t n_src() const { return source_weights.size(); }
  std::size_t n_dst() const { return target_weights.size(); }
  double at(std::size_t i, std::size_t j) const { return gamma[i * n_dst() + j]; }

  double row_sum(std::size_t i) const {
    return detail::sum(std::span<const double>(gamma.data() + i * n_dst(), n_dst()));
  }
  double col_sum(std::size_t j) const {
    detail::NeumaierSum s;
    for (std::size_t i = 0; i < n_src(); ++i) s.add(gamma[i * n_dst() + j]);
    return s.value();
  }
};

namespace detail {

inline void check_pair(const DiscreteDistribution& src, const DiscreteDistribution& dst) {
  if (src.dimension() != dst.dimension()) {
    throw InputError("transport: dimension mismatch (" + std::to_string(src.dimension()) +
                     " vs " + std::to_string(dst.dimension()) + ")");
  }
}

}  // namespace detail

/// Solves the discrete transport linear program exactly and returns an
/// optimal vertex plan.
inline TransportPlan solve_transport(const DiscreteDistribution& src,
                                     const DiscreteDistribution& dst) {
  detail::check_pair(src, dst);
  const CostMatrix c = build_cost_matrix(src, dst);
  detail::TransportationSimplex simplex(c.entries, c.rows, c.cols, src.weights(), dst.weights());
  simplex.solve();

  TransportPlan plan;
  plan.source_weights = src.weights();
  plan.target_weights = dst.weights();
  simplex.extract_flow(plan.gamma);
  detail::NeumaierSum obj;
  for (std::size_t a = 0; a < plan.gamma.size(); ++a) {
    if (plan.gamma[a] != 0.0) obj.add(c.entries[a] * plan.gamma[a]);
  }
  plan.cost = obj.value();
  return plan;
}

/// Squared Wasserstein-2 distance between two discrete distributions.
inline double w2_squared(const DiscreteDistribution& src, const DiscreteDistribution& dst) {
  detail::check_pair(src, dst);
  const CostMatrix c = build_cost_matrix(src, dst);
  detail::TransportationSimplex simplex(c.entries, c.rows, c.cols, src.weights(), dst.weights());
  return simplex.solve();
}

/// Conditional mean of the random transport mapping: row i is
/// sum_j (gamma_ij / p_i) * dst_j, a point in the convex hull of the target
/// supports. Returned flat, n_src * k.
inline std::vector<double> barycentric_map(const TransportPlan& plan,
                                           const DiscreteDistribution& dst) {
  if (plan.n_dst() != dst.size()) {
    throw InputError("barycentric_map: plan target does not match distribution");
  }
  const std::size_t k = dst.dimension();
  const std::size_t n = plan.n_src();
  std::vector<double> out(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = plan.source_weights[i];
    double* row = out.data() + i * k;
    for (std::size_t j = 0; j < plan.n_dst(); ++j) {
      const double g = plan.gamma[i * plan.n_dst() + j];
      if (g == 0.0) continue;
      const double w = g / p;
      const auto target = dst.point(j);
      for (std::size_t d = 0; d < k; ++d) row[d] += w * target[d];
    }
  }
  return out;
}

/// Conditional mean of the reverse mapping read off the same plan: entry j
/// is sum_i (gamma_ij / q_j) * src_i. Returned flat, n_dst * k.
inline std::vector<double> barycentric_map_reverse(const TransportPlan& plan,
                                                   const DiscreteDistribution& src) {
  if (plan.n_src() != src.size()) {
    throw InputError("barycentric_map_reverse: plan source does not match distribution");
  }
  const std::size_t k = src.dimension();
  const std::size_t m = plan.n_dst();
  std::vector<double> out(m * k, 0.0);
  for (std::size_t i = 0; i < plan.n_src(); ++i) {
    const auto point = src.point(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double g = plan.gamma[i * m + j];
      if (g == 0.0) continue;
      const double w = g / plan.target_weights[j];
      double* row = out.data() + j * k;
      for (std::size_t d = 0; d < k; ++d) row[d] += w * point[d];
    }
  }
  return out;
}

/// One seeded realization of the random transport mapping: row i is a
/// target support drawn with probability gamma_ij / p_i. Deterministic in
/// (plan, seed); row draws use independent sub-streams of the seed.
inline std::vector<double> sample_map(const TransportPlan& plan, const DiscreteDistribution& dst,
                                      std::uint64_t seed) {
  if (plan.n_dst() != dst.size()) {
    throw InputError("sample_map: plan target does not match distribution");
  }
  const std::size_t k = dst.dimension();
  const std::size_t n = plan.n_src();
  const std::size_t m = plan.n_dst();
  std::vector<double> out(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    detail::Rng rng(detail::mix_seed(seed, i));
    const double u = rng.uniform() * plan.source_weights[i];
    double acc = 0.0;
    std::size_t pick = m;  // falls back to the last positive entry
    for (std::size_t j = 0; j < m; ++j) {
      const double g = plan.gamma[i * m + j];
      if (g == 0.0) continue;
      acc += g;
      pick = j;
      if (u < acc) break;
    }
    if (pick == m) throw InfeasibleError("sample_map: empty plan row");
    const auto target = dst.point(pick);
    for (std::size_t d = 0; d < k; ++d) out[i * k + d] = target[d];
  }
  return out;
}

/// Pushforward of the source under the coupling: the measure the plan
/// deposits on the target supports (its column marginal).
inline DiscreteDistribution pushforward_measure(const TransportPlan& plan,
                                                const DiscreteDistribution& dst) {
  if (plan.n_dst() != dst.size()) {
    throw InputError("pushforward_measure: plan target does not match distribution");
  }
  std::vector<double> w(plan.n_dst());
  for (std::size_t j = 0; j < plan.n_dst(); ++j) w[j] = plan.col_sum(j);
  return DiscreteDistribution(dst.flat_supports(), dst.dimension(), std::move(w));
}

}  // namespace fairot
