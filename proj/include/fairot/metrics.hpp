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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairot/barycenter.hpp"
#include "fairot/detail/numeric.hpp"
#include "fairot/discrete_distribution.hpp"
#include "fairot/grouped_dataset.hpp"
#include "fairot/postprocess.hpp"
#include "fairot/transport.hpp"

namespace fairot {

/// Evaluation quantities at one interpolation level; one row of a Pareto
/// sweep.
struct FairnessReport {
  std::optional<double> alpha;
  double unfairness_u = 0.0;
  double error_r = 0.0;
  std::vector<double> pairwise_w2;       // row-major |S| x |S|
  std::vector<std::string> group_ids;
  std::optional<double> dp_gap;          // present when k >= 2
  bool exact_barycenter = false;         // which reference anchored U
};

struct UnfairnessResult {
  double value = 0.0;
  bool exact_barycenter = false;
};

/// Weighted sum of squared distances from every group to the barycenter:
/// the exact one when the tuple space fits under `oracle_cap`, otherwise
/// the pairwise approximation. The flag reports which anchored the value.
inline UnfairnessResult unfairness(const std::vector<DiscreteDistribution>& groups,
                                   std::vector<double> weights,
                                   std::size_t oracle_cap = kDefaultOracleCap) {
  if (groups.size() == 1) return {0.0, true};
  const bool exact = !detail::tuple_space_exceeds(groups, oracle_cap);
  const DiscreteDistribution reference =
      exact ? exact_barycenter_oracle(groups, weights, oracle_cap)
            : approximate_barycenter(groups, weights).barycenter;
  return {barycenter_objective(reference, groups, std::move(weights)), exact};
}

/// Mean squared Euclidean deviation between original and processed
/// outputs (both flat, row-major with the same shape).
inline double approximation_error(std::span<const double> original,
                                  std::span<const double> processed, std::size_t dimension) {
  if (original.size() != processed.size()) {
    throw InputError("approximation_error: output lists differ in length");
  }
  if (dimension < 1 || original.size() % dimension != 0) {
    throw InputError("approximation_error: bad shape");
  }
  const std::size_t n = original.size() / dimension;
  detail::NeumaierSum s;
  for (std::size_t i = 0; i < n; ++i) {
    s.add(detail::squared_distance(original.subspan(i * dimension, dimension),
                                   processed.subspan(i * dimension, dimension)));
  }
  return s.value() / static_cast<double>(n);
}

/// Symmetric matrix of pairwise squared W2 distances, zero diagonal.
inline std::vector<double> pairwise_w2(const std::vector<DiscreteDistribution>& groups) {
  const std::size_t m = groups.size();
  std::vector<double> w(m * m, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t t = s + 1; t < m; ++t) {
      const double d = w2_squared(groups[s], groups[t]);
      w[s * m + t] = d;
      w[t * m + s] = d;
    }
  }
  return w;
}

/// Largest between-group difference of predicted-class frequencies, where
/// the prediction is the argmax coordinate (lowest index on ties).
/// `group_of[i]` names the group of `outputs` row i.
inline double multiclass_dp_gap(std::span<const double> outputs, std::size_t dimension,
                                const std::vector<std::string>& group_of) {
  if (dimension < 2) throw InputError("multiclass_dp_gap: needs at least two classes");
  if (outputs.size() != group_of.size() * dimension) {
    throw InputError("multiclass_dp_gap: outputs and groups differ in length");
  }
  std::map<std::string, std::vector<double>> freq;
  std::map<std::string, std::size_t> count;
  for (std::size_t i = 0; i < group_of.size(); ++i) {
    auto& f = freq[group_of[i]];
    f.resize(dimension, 0.0);
    f[static_cast<std::size_t>(argmax_label(outputs.subspan(i * dimension, dimension)))] += 1.0;
    count[group_of[i]] += 1;
  }
  if (freq.empty()) throw InputError("multiclass_dp_gap: no records");
  for (auto& [id, f] : freq) {
    for (double& v : f) v /= static_cast<double>(count[id]);
  }
  double gap = 0.0;
  for (auto a = freq.begin(); a != freq.end(); ++a) {
    for (auto b = std::next(a); b != freq.end(); ++b) {
      for (std::size_t y = 0; y < dimension; ++y) {
        gap = std::max(gap, std::abs(a->second[y] - b->second[y]));
      }
    }
  }
  return gap;
}

/// Coordinatewise quantile-matching baseline: each record coordinate is
/// replaced by the group-size-weighted average of the per-group empirical
/// quantiles at that record's within-group rank. The empirical CDF is
/// right-continuous, F(y) = #{values <= y} / n_s (ties share the rank of
/// the largest tied element); the quantile uses the inf convention.
/// Returns processed outputs in record order, flat n * k.
inline std::vector<double> per_coordinate_baseline(const GroupedDataset& data) {
  const std::size_t k = data.dimension();
  const auto group_indices = data.indices_by_group();
  const std::size_t m = data.groups().size();

  std::vector<double> p(m);
  for (std::size_t s = 0; s < m; ++s) {
    p[s] = static_cast<double>(group_indices[s].size()) / static_cast<double>(data.size());
  }

  // Sorted per-group values for each coordinate.
  std::vector<std::vector<std::vector<double>>> sorted(m, std::vector<std::vector<double>>(k));
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t d = 0; d < k; ++d) {
      auto& v = sorted[s][d];
      v.reserve(group_indices[s].size());
      for (const std::size_t r : group_indices[s]) v.push_back(data.records()[r].output[d]);
      std::sort(v.begin(), v.end());
    }
  }

  std::vector<double> out(data.size() * k, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    const double ns = static_cast<double>(group_indices[s].size());
    for (const std::size_t r : group_indices[s]) {
      for (std::size_t d = 0; d < k; ++d) {
        const double value = data.records()[r].output[d];
        const auto& own = sorted[s][d];
        // F_s(value): rank of the largest element <= value.
        const double rank =
            static_cast<double>(std::upper_bound(own.begin(), own.end(), value) - own.begin()) / ns;
        detail::NeumaierSum mix;
        for (std::size_t t = 0; t < m; ++t) {
          const auto& other = sorted[t][d];
          // Q_t(rank) = inf{ y : F_t(y) >= rank }: the ceil(rank * n_t)-th
          // smallest value.
          const double nt = static_cast<double>(other.size());
          std::size_t idx = static_cast<std::size_t>(std::ceil(rank * nt - 1e-12));
          if (idx < 1) idx = 1;
          if (idx > other.size()) idx = other.size();
          mix.add(p[t] * other[idx - 1]);
        }
        out[r * k + d] = mix.value();
      }
    }
  }
  return out;
}

}  // namespace fairot
