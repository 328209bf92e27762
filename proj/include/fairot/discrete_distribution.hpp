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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairot/detail/numeric.hpp"
#include "fairot/errors.hpp"

namespace fairot {

/// Weighted point cloud in k-dimensional output space.
///
/// Weights are validated at construction: every weight must be positive
/// (at least 1e-15; smaller masses are rejected rather than silently
/// dropped) and the total mass must be 1 within 1e-9, in which case the
/// weights are renormalized exactly. Duplicate support points are allowed
/// and never merged. Instances are immutable after construction.
class DiscreteDistribution {
 public:
  static constexpr double kMinWeight = 1e-15;
  static constexpr double kMassTolerance = 1e-9;

  /// `flat_supports` is row-major, `n * dimension` entries.
  DiscreteDistribution(std::vector<double> flat_supports, std::size_t dimension,
                       std::vector<double> weights)
      : flat_(std::move(flat_supports)), weights_(std::move(weights)), dim_(dimension) {
    if (dim_ < 1) throw InputError("DiscreteDistribution: dimension must be >= 1");
    if (weights_.empty()) throw InputError("DiscreteDistribution: no support points");
    if (flat_.size() != weights_.size() * dim_) {
      throw InputError("DiscreteDistribution: support size " + std::to_string(flat_.size()) +
                       " does not match " + std::to_string(weights_.size()) + " points of dimension " +
                       std::to_string(dim_));
    }
    if (!detail::all_finite(flat_)) {
      throw InputError("DiscreteDistribution: non-finite support coordinate");
    }
    detail::NeumaierSum total;
    for (double w : weights_) {
      if (!(w >= kMinWeight)) {
        throw InputError("DiscreteDistribution: weights must be positive (>= 1e-15)");
      }
      total.add(w);
    }
    const double mass = total.value();
    if (std::abs(mass - 1.0) > kMassTolerance) {
      throw InfeasibleError("DiscreteDistribution: weights sum to " + std::to_string(mass) +
                            ", not a probability vector");
    }
    if (mass != 1.0) {
      for (double& w : weights_) w /= mass;
    }
  }

  /// Uniform weights 1/n over the given row-major supports.
  static DiscreteDistribution uniform(std::vector<double> flat_supports, std::size_t dimension) {
    if (dimension < 1 || flat_supports.empty() || flat_supports.size() % dimension != 0) {
      throw InputError("DiscreteDistribution::uniform: bad support shape");
    }
    const std::size_t n = flat_supports.size() / dimension;
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    return DiscreteDistribution(std::move(flat_supports), dimension, std::move(w));
  }

  static DiscreteDistribution from_points(const std::vector<std::vector<double>>& points,
                                          std::vector<double> weights = {}) {
    if (points.empty()) throw InputError("DiscreteDistribution: no support points");
    const std::size_t dim = points.front().size();
    std::vector<double> flat;
    flat.reserve(points.size() * dim);
    for (const auto& p : points) {
      if (p.size() != dim) {
        throw InputError("DiscreteDistribution: support points have mixed dimensions");
      }
      flat.insert(flat.end(), p.begin(), p.end());
    }
    if (weights.empty()) return uniform(std::move(flat), dim);
    return DiscreteDistribution(std::move(flat), dim, std::move(weights));
  }

  std::size_t size() const { return weights_.size(); }
  std::size_t dimension() const { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(flat_.data() + i * dim_, dim_);
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& flat_supports() const { return flat_; }

 private:
  std::vector<double> flat_;
  std::vector<double> weights_;
  std::size_t dim_;
};

/// Pairwise squared Euclidean distances between two support sets.
struct CostMatrix {
  std::vector<double> entries;  // row-major, rows * cols
  std::size_t rows = 0;
  std::size_t cols = 0;

  double at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  double max_entry() const {
    double m = 0.0;
    for (double c : entries) m = c > m ? c : m;
    return m;
  }
};

/// entries[i][j] = squared Euclidean distance from src point i to dst point j.
inline CostMatrix build_cost_matrix(const DiscreteDistribution& src,
                                    const DiscreteDistribution& dst) {
  if (src.dimension() != dst.dimension()) {
    throw InputError("build_cost_matrix: dimension mismatch (" + std::to_string(src.dimension()) +
                     " vs " + std::to_string(dst.dimension()) + ")");
  }
  CostMatrix c;
  c.rows = src.size();
  c.cols = dst.size();
  c.entries.resize(c.rows * c.cols);
  for (std::size_t i = 0; i < c.rows; ++i) {
    const auto a = src.point(i);
    double* row = c.entries.data() + i * c.cols;
    for (std::size_t j = 0; j < c.cols; ++j) {
      row[j] = detail::squared_distance(a, dst.point(j));
    }
  }
  return c;
}

}  // namespace fairot
