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

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairot/errors.hpp"
#include "fairot/grouped_dataset.hpp"
#include "fairot/metrics.hpp"
#include "fairot/postprocess.hpp"

namespace fairot {

// ---------------------------------------------------------------------------
// Numeric text encoding: shortest decimal that round-trips the double.
// ---------------------------------------------------------------------------

inline std::string encode_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double decode_double(std::string_view text, const std::string& where) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InputError(where + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

inline int decode_int(std::string_view text, const std::string& where) {
  int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InputError(where + ": '" + std::string(text) + "' is not an integer");
  }
  return value;
}

// ---------------------------------------------------------------------------
// CSV ingestion and emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

/// Column layout of an ingested CSV: group, y0..y{k-1}, optional label.
/// An in_sample column (as written by the transform subcommand) is
/// accepted and skipped, so transform output feeds straight into evaluate.
struct CsvSchema {
  std::size_t dimension = 0;
  bool has_label = false;
  bool has_in_sample = false;
  std::size_t group_col = 0;
  std::vector<std::size_t> y_cols;  // y_cols[d] is the column of y{d}
  std::size_t label_col = 0;
};

inline CsvSchema parse_csv_header(const std::vector<std::string>& header, const std::string& path) {
  CsvSchema schema;
  std::vector<int> y_index(header.size(), -1);
  bool saw_group = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "group") {
      if (saw_group) throw InputError(path + ": duplicate 'group' column");
      schema.group_col = c;
      saw_group = true;
    } else if (name == "label") {
      if (schema.has_label) throw InputError(path + ": duplicate 'label' column");
      schema.label_col = c;
      schema.has_label = true;
    } else if (name == "in_sample") {
      schema.has_in_sample = true;
    } else if (name.size() >= 2 && name[0] == 'y') {
      const int d = decode_int(std::string_view(name).substr(1), path + ": header column '" + name + "'");
      if (d < 0 || static_cast<std::size_t>(d) >= header.size()) {
        throw InputError(path + ": output column '" + name + "' out of range");
      }
      if (y_index[static_cast<std::size_t>(d)] >= 0) {
        throw InputError(path + ": duplicate column '" + name + "'");
      }
      y_index[static_cast<std::size_t>(d)] = static_cast<int>(c);
    } else {
      throw InputError(path + ": unexpected column '" + name +
                       "' (want group, y0..y{k-1} and optional label)");
    }
  }
  if (!saw_group) throw InputError(path + ": missing required 'group' column");
  for (std::size_t d = 0; d < header.size(); ++d) {
    if (y_index[d] < 0) break;
    schema.y_cols.push_back(static_cast<std::size_t>(y_index[d]));
  }
  schema.dimension = schema.y_cols.size();
  if (schema.dimension == 0) throw InputError(path + ": no output columns (want y0..y{k-1})");
  for (std::size_t d = schema.dimension; d < header.size(); ++d) {
    if (y_index[d] >= 0) {
      throw InputError(path + ": output columns must be contiguous y0..y{k-1}; found gap before y" +
                       std::to_string(d));
    }
  }
  return schema;
}

/// Reads a dataset CSV. The output dimension is inferred from the header;
/// malformed or non-finite numeric fields are rejected with their file
/// line number and column name.
inline GroupedDataset ingest_csv(const std::string& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty()) throw InputError(path + ": empty file");
  const auto header = detail::split_csv_line(lines.front());
  const CsvSchema schema = parse_csv_header(header, path);

  std::vector<Record> records;
  records.reserve(lines.size() - 1);
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = detail::split_csv_line(lines[ln]);
    const std::string where = path + ":" + std::to_string(ln + 1);
    if (fields.size() != header.size()) {
      throw InputError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    Record rec;
    rec.group = fields[schema.group_col];
    if (rec.group.empty()) throw InputError(where + ": empty group id");
    rec.output.resize(schema.dimension);
    for (std::size_t d = 0; d < schema.dimension; ++d) {
      const double v = decode_double(fields[schema.y_cols[d]], where + " column y" + std::to_string(d));
      if (!std::isfinite(v)) {
        throw InputError(where + " column y" + std::to_string(d) + ": non-finite value");
      }
      rec.output[d] = v;
    }
    if (schema.has_label) {
      rec.label = decode_int(fields[schema.label_col], where + " column label");
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw InputError(path + ": no data rows");
  return GroupedDataset(std::move(records));
}

/// Writes records as group, y0..y{k-1}[, label][, in_sample].
inline void write_csv(const std::string& path, const GroupedDataset& data,
                      const std::vector<bool>* in_sample = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  const std::size_t k = data.dimension();
  const bool labels = data.has_labels();
  out << "group";
  for (std::size_t d = 0; d < k; ++d) out << ",y" << d;
  if (labels) out << ",label";
  if (in_sample) out << ",in_sample";
  out << "\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    const Record& rec = data.records()[r];
    out << rec.group;
    for (std::size_t d = 0; d < k; ++d) out << ',' << encode_double(rec.output[d]);
    if (labels) out << ',' << *rec.label;
    if (in_sample) out << ',' << ((*in_sample)[r] ? "true" : "false");
    out << "\n";
  }
  if (!out) throw InputError("failed while writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Model document: versioned, self-describing, diffable text
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json plain_model_to_json(const FittedPostprocessor& model) {
  nlohmann::ordered_json doc;
  doc["format_version"] = model.format_version();
  doc["kind"] = "plain";
  doc["dimension"] = model.dimension();
  doc["mode"] = to_string(model.mode());
  doc["seed"] = model.seed();
  doc["bandwidth"] = model.bandwidth();
  auto& groups = doc["groups"];
  groups = nlohmann::ordered_json::array();
  for (const auto& g : model.groups()) {
    nlohmann::ordered_json jg;
    jg["id"] = g.id;
    jg["weight"] = g.weight;
    jg["count"] = g.supports.size() / model.dimension();
    jg["supports"] = g.supports;  // row-major
    jg["targets"] = g.targets;    // row-major
    groups.push_back(std::move(jg));
  }
  return doc;
}

inline FittedPostprocessor plain_model_from_json(const nlohmann::json& doc, const std::string& path) {
  const int version = doc.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw InputError(path + ": unsupported model format version " + std::to_string(version));
  }
  const std::size_t k = doc.at("dimension").get<std::size_t>();
  std::vector<FittedPostprocessor::GroupData> groups;
  for (const auto& jg : doc.at("groups")) {
    FittedPostprocessor::GroupData g;
    g.id = jg.at("id").get<std::string>();
    g.weight = jg.at("weight").get<double>();
    g.supports = jg.at("supports").get<std::vector<double>>();
    g.targets = jg.at("targets").get<std::vector<double>>();
    const std::size_t count = jg.at("count").get<std::size_t>();
    if (g.supports.size() != count * k || g.targets.size() != count * k) {
      throw InputError(path + ": group '" + g.id + "' arrays do not match count * dimension");
    }
    groups.push_back(std::move(g));
  }
  if (groups.empty()) throw InputError(path + ": model has no groups");
  return FittedPostprocessor(k, std::move(groups),
                             transport_mode_from_string(doc.at("mode").get<std::string>()),
                             doc.at("seed").get<std::uint64_t>(), doc.at("bandwidth").get<double>(),
                             std::nullopt, version);
}

}  // namespace detail

/// A fitted model on disk: either a single postprocessor or the per-label
/// family of an equalized notion.
struct ModelDocument {
  std::optional<FittedPostprocessor> plain;
  std::optional<EqualizedPostprocessor> equalized;

  std::size_t dimension() const {
    return plain ? plain->dimension() : equalized->per_label().begin()->second.dimension();
  }
  double bandwidth() const {
    return plain ? plain->bandwidth() : equalized->per_label().begin()->second.bandwidth();
  }
};

inline void save_model(const std::string& path, const FittedPostprocessor& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << detail::plain_model_to_json(model).dump(2) << "\n";
  if (!out) throw InputError("failed while writing '" + path + "'");
}

inline void save_model(const std::string& path, const EqualizedPostprocessor& model) {
  nlohmann::ordered_json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["kind"] = "equalized";
  doc["notion"] =
      model.notion().kind == EqualizedNotion::Kind::kOdds ? "odds" : "opportunity";
  if (model.notion().kind == EqualizedNotion::Kind::kOpportunity) {
    doc["target_label"] = model.notion().target_label;
  }
  auto& labels = doc["labels"];
  labels = nlohmann::ordered_json::array();
  for (const auto& [label, sub] : model.per_label()) {
    nlohmann::ordered_json jl;
    jl["label"] = label;
    jl["model"] = detail::plain_model_to_json(sub);
    labels.push_back(std::move(jl));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
  if (!out) throw InputError("failed while writing '" + path + "'");
}

inline ModelDocument load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": not a valid model document: " + e.what());
  }
  ModelDocument model;
  const std::string kind = doc.value("kind", "plain");
  if (kind == "plain") {
    model.plain = detail::plain_model_from_json(doc, path);
  } else if (kind == "equalized") {
    const std::string notion = doc.at("notion").get<std::string>();
    std::map<int, FittedPostprocessor> per_label;
    for (const auto& jl : doc.at("labels")) {
      per_label.emplace(jl.at("label").get<int>(),
                        detail::plain_model_from_json(jl.at("model"), path));
    }
    EqualizedNotion n = notion == "odds"
                            ? EqualizedNotion::odds()
                            : EqualizedNotion::opportunity(doc.at("target_label").get<int>());
    model.equalized = EqualizedPostprocessor(n, std::move(per_label));
  } else {
    throw InputError(path + ": unknown model kind '" + kind + "'");
  }
  return model;
}

// ---------------------------------------------------------------------------
// Fairness report document
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_to_json(const FairnessReport& report) {
  nlohmann::ordered_json doc;
  if (report.alpha) {
    doc["alpha"] = *report.alpha;
  } else {
    doc["alpha"] = nullptr;
  }
  doc["unfairness_u"] = report.unfairness_u;
  doc["error_r"] = report.error_r;
  if (report.dp_gap) {
    doc["dp_gap"] = *report.dp_gap;
  } else {
    doc["dp_gap"] = nullptr;
  }
  doc["barycenter"] = report.exact_barycenter ? "exact" : "approximate";
  doc["groups"] = report.group_ids;
  const std::size_t m = report.group_ids.size();
  auto& w2 = doc["pairwise_w2"];
  w2 = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < m; ++s) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < m; ++t) row.push_back(report.pairwise_w2[s * m + t]);
    w2.push_back(std::move(row));
  }
  return doc;
}

inline void save_report(const std::string& path, const FairnessReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << report_to_json(report).dump(2) << "\n";
  if (!out) throw InputError("failed while writing '" + path + "'");
}

}  // namespace fairot
