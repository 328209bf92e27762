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

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fairot/detail/numeric.hpp"
#include "fairot/errors.hpp"

namespace fairot {

/// Gaussian bandwidth grid exposed for configuration.
inline constexpr double kBandwidthGrid[4] = {0.02, 0.04, 0.5, 1.0};

/// Default bandwidth by output dimension: 0.04 up to 16 dimensions, 0.5
/// beyond (smaller bandwidths track the training map more closely but get
/// numerically thin in high dimension).
inline double default_bandwidth(std::size_t dimension) {
  return dimension <= 16 ? 0.04 : 0.5;
}

/// Nadaraya-Watson regressor with the radial Gaussian kernel
/// exp(-|q - x_i|^2 / (2 h^2)). Weights are normalized with the
/// max-exponent subtracted first, so any finite query yields finite
/// weights; when every kernel term but the nearest underflows, the output
/// collapses to the nearest target, matching the h -> 0 limit.
class KernelRegressor {
 public:
  /// Both matrices are row-major with matching row counts; `train_points`
  /// is n x k and `targets` n x k.
  KernelRegressor(std::vector<double> train_points, std::vector<double> targets,
                  std::size_t dimension, double bandwidth)
      : train_(std::move(train_points)),
        targets_(std::move(targets)),
        dim_(dimension),
        h_(bandwidth) {
    if (dim_ < 1) throw InputError("KernelRegressor: dimension must be >= 1");
    if (train_.empty() || train_.size() % dim_ != 0) {
      throw InputError("KernelRegressor: bad training matrix shape");
    }
    if (targets_.size() != train_.size()) {
      throw InputError("KernelRegressor: training points and targets differ in count");
    }
    if (!(h_ > 0.0) || !std::isfinite(h_)) {
      throw InputError("KernelRegressor: bandwidth must be positive and finite");
    }
  }

  std::size_t size() const { return train_.size() / dim_; }
  std::size_t dimension() const { return dim_; }
  double bandwidth() const { return h_; }

  /// Normalized kernel weights of a query against every training point.
  std::vector<double> kernel_weights(std::span<const double> query) const {
    check_query(query);
    const std::size_t n = size();
    std::vector<double> w(n);
    const double inv = 1.0 / (2.0 * h_ * h_);
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = -detail::squared_distance(query, point(i)) * inv;
      if (w[i] > emax) emax = w[i];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::exp(w[i] - emax);
      total += w[i];
    }
    for (std::size_t i = 0; i < n; ++i) w[i] /= total;
    return w;
  }

  /// Kernel-weighted average of the targets; always a convex combination
  /// of target rows.
  std::vector<double> regress(std::span<const double> query) const {
    const std::vector<double> w = kernel_weights(query);
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0.0) continue;
      const double* t = targets_.data() + i * dim_;
      for (std::size_t d = 0; d < dim_; ++d) out[d] += w[i] * t[d];
    }
    return out;
  }

  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(train_.data() + i * dim_, dim_);
  }
  std::span<const double> target(std::size_t i) const {
    return std::span<const double>(targets_.data() + i * dim_, dim_);
  }

 private:
  void check_query(std::span<const double> query) const {
    if (query.size() != dim_) throw InputError("KernelRegressor: query dimension mismatch");
    if (!detail::all_finite(query)) throw InputError("KernelRegressor: non-finite query");
  }

  std::vector<double> train_;
  std::vector<double> targets_;
  std::size_t dim_;
  double h_;
};

}  // namespace fairot
