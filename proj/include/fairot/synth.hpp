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
#include <limits>
#include <cstdint>
#include <string>
#include <vector>

#include "fairot/detail/rng.hpp"
#include "fairot/errors.hpp"
#include "fairot/grouped_dataset.hpp"

namespace fairot {

// Desk-scale generators for exercising the pipeline end to end. All of
// them are deterministic in (n, seed) and emit n records per group.

/// Two 2-D groups whose outputs share the same per-coordinate marginal
/// distributions (Gaussian around 0.5) but have opposite dependence
/// structure: correlation +0.9 in group g0 and -0.9 in group g1. Each
/// coordinate looks fair on its own while the joint distributions are far
/// apart.
inline GroupedDataset synth_figure1(std::size_t n, std::uint64_t seed) {
  if (n < 10) throw InputError("synth: need at least 10 records per group");
  constexpr double kMean = 0.5;
  constexpr double kStd = 0.15;
  constexpr double kRho = 0.9;
  const double cross = std::sqrt(1.0 - kRho * kRho);
  std::vector<Record> records;
  records.reserve(2 * n);
  for (int g = 0; g < 2; ++g) {
    detail::Rng rng(detail::mix_seed(seed, 101 + g));
    const double rho = g == 0 ? kRho : -kRho;
    for (std::size_t i = 0; i < n; ++i) {
      const double e1 = rng.normal();
      const double e2 = rho * e1 + cross * rng.normal();
      records.push_back({{kMean + kStd * e1, kMean + kStd * e2}, g == 0 ? "g0" : "g1", {}});
    }
  }
  return GroupedDataset(std::move(records));
}

/// Two groups, three classes, heavy group bias in the predicted-class mix:
/// scores are the softmax of a Gaussian logit cloud whose class-0 logit is
/// shifted up for group g0 and whose class-2 logit is shifted up for g1,
/// leaving an argmax frequency gap around 0.7 before processing. The clouds
/// overlap smoothly, so the transport map between them extrapolates well.
/// Labels carry the argmax class.
inline GroupedDataset synth_multiclass(std::size_t n, std::uint64_t seed) {
  if (n < 10) throw InputError("synth: need at least 10 records per group");
  constexpr double kShift = 1.1;
  constexpr double kNoise = 1.0;
  std::vector<Record> records;
  records.reserve(2 * n);
  for (int g = 0; g < 2; ++g) {
    detail::Rng rng(detail::mix_seed(seed, 211 + g));
    const double mu[3] = {g == 0 ? kShift : -kShift, 0.0, g == 0 ? -kShift : kShift};
    for (std::size_t i = 0; i < n; ++i) {
      double z[3];
      double zmax = -std::numeric_limits<double>::infinity();
      for (int d = 0; d < 3; ++d) {
        z[d] = mu[d] + kNoise * rng.normal();
        zmax = std::max(zmax, z[d]);
      }
      std::vector<double> y(3);
      double total = 0.0;
      for (int d = 0; d < 3; ++d) {
        y[d] = std::exp(z[d] - zmax);
        total += y[d];
      }
      for (double& v : y) v /= total;  // a probability vector per record
      int cls = 0;
      for (int d = 1; d < 3; ++d) {
        if (y[d] > y[cls]) cls = d;
      }
      records.push_back({std::move(y), g == 0 ? "g0" : "g1", cls});
    }
  }
  return GroupedDataset(std::move(records));
}

/// Two groups, four outputs read as two binary tasks: per-task marginals
/// match across groups while the tasks are positively associated in g0 and
/// negatively in g1. Labels carry the first task's latent state.
inline GroupedDataset synth_multilabel(std::size_t n, std::uint64_t seed) {
  if (n < 10) throw InputError("synth: need at least 10 records per group");
  constexpr double kRho = 0.8;
  const double cross = std::sqrt(1.0 - kRho * kRho);
  std::vector<Record> records;
  records.reserve(2 * n);
  for (int g = 0; g < 2; ++g) {
    detail::Rng rng(detail::mix_seed(seed, 307 + g));
    const double rho = g == 0 ? kRho : -kRho;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rng.normal();
      const double b = rho * a + cross * rng.normal();
      const auto squash = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
      std::vector<double> y{squash(1.2 * a), squash(1.2 * b), squash(0.6 * a + 0.3),
                            squash(0.6 * b - 0.3)};
      records.push_back({std::move(y), g == 0 ? "g0" : "g1", a > 0.0 ? 1 : 0});
    }
  }
  return GroupedDataset(std::move(records));
}

inline GroupedDataset run_synth(const std::string& scenario, std::size_t n, std::uint64_t seed) {
  if (scenario == "figure1") return synth_figure1(n, seed);
  if (scenario == "multiclass") return synth_multiclass(n, seed);
  if (scenario == "multilabel") return synth_multilabel(n, seed);
  throw InputError("unknown scenario '" + scenario + "' (want figure1, multiclass or multilabel)");
}

}  // namespace fairot
