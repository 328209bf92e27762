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
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairot/detail/numeric.hpp"
#include "fairot/errors.hpp"

namespace fairot {

/// One model output with its group id and optional class label.
struct Record {
  std::vector<double> output;
  std::string group;
  std::optional<int> label;
};

/// Records of (output vector, group id, optional label). Group ids are
/// opaque strings; the canonical group order is lexicographic.
class GroupedDataset {
 public:
  explicit GroupedDataset(std::vector<Record> records) : records_(std::move(records)) {
    if (records_.empty()) throw InputError("GroupedDataset: no records");
    dim_ = records_.front().output.size();
    if (dim_ < 1) throw InputError("GroupedDataset: empty output vector");
    for (std::size_t r = 0; r < records_.size(); ++r) {
      const Record& rec = records_[r];
      if (rec.output.size() != dim_) {
        throw InputError("GroupedDataset: record " + std::to_string(r) + " has dimension " +
                         std::to_string(rec.output.size()) + ", expected " + std::to_string(dim_));
      }
      if (!detail::all_finite(rec.output)) {
        throw InputError("GroupedDataset: record " + std::to_string(r) + " has a non-finite output");
      }
    }
    for (const Record& rec : records_) {
      if (std::find(groups_.begin(), groups_.end(), rec.group) == groups_.end()) {
        groups_.push_back(rec.group);
      }
    }
    std::sort(groups_.begin(), groups_.end());
  }

  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  std::size_t dimension() const { return dim_; }

  /// Sorted group ids.
  const std::vector<std::string>& groups() const { return groups_; }

  bool has_labels() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const Record& r) { return r.label.has_value(); });
  }

  /// Record indices per group, in record order, keyed by sorted group id.
  std::vector<std::vector<std::size_t>> indices_by_group() const {
    std::vector<std::vector<std::size_t>> out(groups_.size());
    for (std::size_t r = 0; r < records_.size(); ++r) {
      const auto it = std::lower_bound(groups_.begin(), groups_.end(), records_[r].group);
      out[static_cast<std::size_t>(it - groups_.begin())].push_back(r);
    }
    return out;
  }

  /// Subset with the given label; record order is preserved.
  GroupedDataset filter_label(int label) const {
    std::vector<Record> subset;
    for (const Record& r : records_) {
      if (r.label && *r.label == label) subset.push_back(r);
    }
    if (subset.empty()) {
      throw InputError("GroupedDataset: no records with label " + std::to_string(label));
    }
    return GroupedDataset(std::move(subset));
  }

  /// Distinct labels in ascending order; requires every record labeled.
  std::vector<int> label_set() const {
    std::vector<int> labels;
    for (const Record& r : records_) {
      if (!r.label) throw InputError("GroupedDataset: record without label");
      if (std::find(labels.begin(), labels.end(), *r.label) == labels.end()) {
        labels.push_back(*r.label);
      }
    }
    std::sort(labels.begin(), labels.end());
    return labels;
  }

 private:
  std::vector<Record> records_;
  std::vector<std::string> groups_;
  std::size_t dim_ = 0;
};

}  // namespace fairot
