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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairot/barycenter.hpp"
#include "fairot/detail/numeric.hpp"
#include "fairot/detail/rng.hpp"
#include "fairot/discrete_distribution.hpp"
#include "fairot/grouped_dataset.hpp"
#include "fairot/kernel_regression.hpp"
#include "fairot/transport.hpp"

namespace fairot {

/// How per-point transport targets are materialized: the conditional mean
/// of the random transport mapping, or one seeded realization of it.
enum class TransportMode { kBarycentric, kStochastic };

inline std::string to_string(TransportMode mode) {
  return mode == TransportMode::kBarycentric ? "barycentric" : "stochastic";
}

inline TransportMode transport_mode_from_string(const std::string& s) {
  if (s == "barycentric") return TransportMode::kBarycentric;
  if (s == "stochastic") return TransportMode::kStochastic;
  throw InputError("unknown transport mode '" + s + "' (want barycentric or stochastic)");
}

inline constexpr int kModelFormatVersion = 1;

/// Per-group transports to the pooled reference distribution, fitted on a
/// grouped dataset. Immutable once fitted; transforms are pure and safe to
/// call concurrently.
class FittedPostprocessor {
 public:
  struct GroupData {
    std::string id;
    double weight = 0.0;                 // share of the training data
    std::vector<double> supports;        // flat n_s * k training outputs
    std::vector<double> targets;         // flat n_s * k transported outputs
    std::optional<TransportPlan> plan;   // coupling to the reference; not serialized
  };

  FittedPostprocessor(std::size_t dimension, std::vector<GroupData> groups, TransportMode mode,
                      std::uint64_t seed, double bandwidth,
                      std::optional<DiscreteDistribution> reference = std::nullopt,
                      int format_version = kModelFormatVersion)
      : dim_(dimension),
        groups_(std::move(groups)),
        mode_(mode),
        seed_(seed),
        bandwidth_(bandwidth),
        reference_(std::move(reference)),
        format_version_(format_version) {
    for (std::size_t s = 0; s < groups_.size(); ++s) {
      index_[groups_[s].id] = s;
    }
  }

  std::size_t dimension() const { return dim_; }
  TransportMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  double bandwidth() const { return bandwidth_; }
  int format_version() const { return format_version_; }
  const std::vector<GroupData>& groups() const { return groups_; }

  /// The fitted reference distribution; present only on freshly fitted
  /// models (it is not part of the serialized document).
  const std::optional<DiscreteDistribution>& reference() const { return reference_; }

  std::size_t group_index(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown group '" + id + "'");
    return it->second;
  }

  bool has_group(const std::string& id) const { return index_.count(id) > 0; }

  /// Index of the training support exactly equal to `output` within the
  /// group, lowest index on duplicates.
  std::optional<std::size_t> find_in_sample(const std::string& group,
                                            std::span<const double> output) const {
    const GroupData& g = groups_[group_index(group)];
    const std::size_t n = g.supports.size() / dim_;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::equal(output.begin(), output.end(), g.supports.begin() + i * dim_)) {
        return i;
      }
    }
    return std::nullopt;
  }

  /// Interpolates a training record toward its stored transport target:
  /// sqrt(alpha) * output + (1 - sqrt(alpha)) * target.
  std::vector<double> transform_in_sample(const std::string& group, std::size_t index,
                                          double alpha) const {
    check_alpha(alpha);
    const GroupData& g = groups_[group_index(group)];
    if ((index + 1) * dim_ > g.targets.size()) {
      throw InputError("transform_in_sample: record index out of range");
    }
    return interpolate(std::span<const double>(g.supports.data() + index * dim_, dim_),
                       std::span<const double>(g.targets.data() + index * dim_, dim_), alpha);
  }

  /// As above, keyed by the exact output vector; refused when the vector is
  /// not a stored training support of the group.
  std::vector<double> transform_in_sample(const std::string& group, std::span<const double> output,
                                          double alpha) const {
    const auto idx = find_in_sample(group, output);
    if (!idx) {
      throw InputError("transform_in_sample: output is not a training record of group '" + group +
                       "'; use transform_out_of_sample");
    }
    return transform_in_sample(group, *idx, alpha);
  }

  /// Kernel extrapolation of the per-group transport map to an arbitrary
  /// query, then the same interpolation.
  std::vector<double> transform_out_of_sample(const std::string& group,
                                              std::span<const double> output, double alpha,
                                              double bandwidth) const {
    check_alpha(alpha);
    const GroupData& g = groups_[group_index(group)];
    KernelRegressor reg(g.supports, g.targets, dim_, bandwidth);
    const std::vector<double> mapped = reg.regress(output);
    return interpolate(output, mapped, alpha);
  }

  std::vector<double> transform_out_of_sample(const std::string& group,
                                              std::span<const double> output, double alpha) const {
    return transform_out_of_sample(group, output, alpha, bandwidth_);
  }

  /// The in-sample/out-of-sample branch in one call; the flag reports which
  /// path was taken.
  std::pair<std::vector<double>, bool> transform(const std::string& group,
                                                 std::span<const double> output, double alpha,
                                                 double bandwidth) const {
    const auto idx = find_in_sample(group, output);
    if (idx) return {transform_in_sample(group, *idx, alpha), true};
    return {transform_out_of_sample(group, output, alpha, bandwidth), false};
  }

  /// Measure a group's coupling deposits on the reference supports. Exact
  /// parity at alpha = 0 holds at this level: every group's pushforward is
  /// the reference itself. Requires the fitted plans (absent after
  /// deserialization).
  DiscreteDistribution group_pushforward(const std::string& group) const {
    const GroupData& g = groups_[group_index(group)];
    if (!g.plan || !reference_) {
      throw InputError("group_pushforward: plans are only available on freshly fitted models");
    }
    return pushforward_measure(*g.plan, *reference_);
  }

  /// Weighted transport cost of the fitted plans: the barycenter objective
  /// at the reference distribution.
  double reference_objective() const {
    detail::NeumaierSum s;
    for (const GroupData& g : groups_) {
      if (!g.plan) throw InputError("reference_objective: plans are absent on loaded models");
      s.add(g.weight * g.plan->cost);
    }
    return s.value();
  }

 private:
  static void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw InputError("alpha must lie in [0, 1]");
    }
  }

  std::vector<double> interpolate(std::span<const double> original, std::span<const double> target,
                                  double alpha) const {
    const double root = std::sqrt(alpha);
    std::vector<double> out(dim_);
    for (std::size_t d = 0; d < dim_; ++d) {
      out[d] = root * original[d] + (1.0 - root) * target[d];
    }
    return out;
  }

  std::size_t dim_;
  std::vector<GroupData> groups_;
  TransportMode mode_;
  std::uint64_t seed_;
  double bandwidth_;
  std::optional<DiscreteDistribution> reference_;
  int format_version_;
  std::map<std::string, std::size_t> index_;
};

/// Fits the post-processor: partitions the data by group, builds the
/// approximate barycenter of the per-group empirical distributions, solves
/// one plan from every group to it, and materializes per-record targets
/// (conditional means, or seeded draws in stochastic mode). Deterministic
/// in (record order, mode, seed).
inline FittedPostprocessor fit(const GroupedDataset& data,
                               TransportMode mode = TransportMode::kBarycentric,
                               std::uint64_t seed = 0,
                               std::optional<double> bandwidth = std::nullopt) {
  const std::size_t k = data.dimension();
  const auto group_indices = data.indices_by_group();
  const std::vector<std::string>& ids = data.groups();

  std::vector<DiscreteDistribution> groups;
  groups.reserve(ids.size());
  for (std::size_t s = 0; s < ids.size(); ++s) {
    std::vector<double> flat;
    flat.reserve(group_indices[s].size() * k);
    for (const std::size_t r : group_indices[s]) {
      const auto& out = data.records()[r].output;
      flat.insert(flat.end(), out.begin(), out.end());
    }
    groups.push_back(DiscreteDistribution::uniform(std::move(flat), k));
  }

  const std::vector<double> p = size_proportional_weights(groups);
  BarycenterResult bary = approximate_barycenter(groups, p);

  std::vector<FittedPostprocessor::GroupData> fitted(ids.size());
  for (std::size_t s = 0; s < ids.size(); ++s) {
    FittedPostprocessor::GroupData& g = fitted[s];
    g.id = ids[s];
    g.weight = p[s];
    g.supports = groups[s].flat_supports();
    g.plan = solve_transport(groups[s], bary.barycenter);
    g.targets = mode == TransportMode::kBarycentric
                    ? barycentric_map(*g.plan, bary.barycenter)
                    : sample_map(*g.plan, bary.barycenter, detail::mix_seed(seed, s));
  }

  const double h = bandwidth.value_or(default_bandwidth(k));
  return FittedPostprocessor(k, std::move(fitted), mode, seed, h, std::move(bary.barycenter));
}

/// Which conditional-parity notion an equalized postprocessor enforces.
struct EqualizedNotion {
  enum class Kind { kOdds, kOpportunity };
  Kind kind = Kind::kOdds;
  int target_label = 0;  // meaningful for kOpportunity only

  static EqualizedNotion odds() { return {Kind::kOdds, 0}; }
  static EqualizedNotion opportunity(int label) { return {Kind::kOpportunity, label}; }
};

/// One postprocessor per class label, fitted on the label's slice of the
/// training data and selected at transform time by the predicted label.
class EqualizedPostprocessor {
 public:
  EqualizedPostprocessor(EqualizedNotion notion, std::map<int, FittedPostprocessor> per_label)
      : notion_(notion), per_label_(std::move(per_label)) {
    if (notion_.kind == EqualizedNotion::Kind::kOpportunity && per_label_.size() != 1) {
      throw InputError("opportunity notion requires exactly one fitted label");
    }
  }

  const EqualizedNotion& notion() const { return notion_; }
  const std::map<int, FittedPostprocessor>& per_label() const { return per_label_; }

  /// Routes to the predicted label's postprocessor. Under opportunity,
  /// records predicted as any other label pass through unchanged.
  std::pair<std::vector<double>, bool> transform(const std::string& group,
                                                 std::span<const double> output,
                                                 int predicted_label, double alpha,
                                                 double bandwidth) const {
    const auto it = per_label_.find(predicted_label);
    if (it == per_label_.end()) {
      if (notion_.kind == EqualizedNotion::Kind::kOpportunity) {
        return {std::vector<double>(output.begin(), output.end()), false};
      }
      throw InputError("no fitted postprocessor for predicted label " +
                       std::to_string(predicted_label));
    }
    return it->second.transform(group, output, alpha, bandwidth);
  }

 private:
  EqualizedNotion notion_;
  std::map<int, FittedPostprocessor> per_label_;
};

/// Fits per-label postprocessors for distributionally equalized odds or
/// equal opportunity. Every required (group, label) cell must be nonempty.
inline EqualizedPostprocessor fit_equalized(const GroupedDataset& data, EqualizedNotion notion,
                                            TransportMode mode = TransportMode::kBarycentric,
                                            std::uint64_t seed = 0,
                                            std::optional<double> bandwidth = std::nullopt) {
  if (!data.has_labels()) {
    throw InputError("fit_equalized: every record needs a label");
  }
  std::vector<int> labels;
  if (notion.kind == EqualizedNotion::Kind::kOdds) {
    labels = data.label_set();
  } else {
    labels = {notion.target_label};
  }

  const double h = bandwidth ? *bandwidth : default_bandwidth(data.dimension());
  std::map<int, FittedPostprocessor> per_label;
  for (const int y : labels) {
    GroupedDataset slice = [&] {
      try {
        return data.filter_label(y);
      } catch (const InputError&) {
        throw InputError("fit_equalized: no records with label " + std::to_string(y));
      }
    }();
    for (const std::string& g : data.groups()) {
      const auto& slice_groups = slice.groups();
      if (std::find(slice_groups.begin(), slice_groups.end(), g) == slice_groups.end()) {
        throw InputError("fit_equalized: empty cell (group '" + g + "', label " +
                         std::to_string(y) + ")");
      }
    }
    per_label.emplace(y, fit(slice, mode, seed, h));
  }
  return EqualizedPostprocessor(notion, std::move(per_label));
}

/// Predicted class: argmax over the output coordinates, lowest index on
/// ties.
inline int argmax_label(std::span<const double> output) {
  std::size_t best = 0;
  for (std::size_t d = 1; d < output.size(); ++d) {
    if (output[d] > output[best]) best = d;
  }
  return static_cast<int>(best);
}

}  // namespace fairot
