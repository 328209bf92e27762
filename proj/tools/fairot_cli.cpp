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

// Batch interface: synth, fit, transform, evaluate and sweep subcommands
// over the CSV/JSON formats described in the README.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairot/fairot.hpp"

namespace {

using fairot::EqualizedNotion;
using fairot::FairnessReport;
using fairot::GroupedDataset;
using fairot::InputError;
using fairot::ModelDocument;

struct NotionSpec {
  bool plain = true;
  EqualizedNotion notion;
};

NotionSpec parse_notion(const std::string& text) {
  if (text == "plain") return {true, {}};
  if (text == "odds") return {false, EqualizedNotion::odds()};
  const std::string prefix = "opportunity:";
  if (text.rfind(prefix, 0) == 0) {
    return {false, EqualizedNotion::opportunity(
                       fairot::decode_int(text.substr(prefix.size()), "--notion"))};
  }
  throw InputError("unknown notion '" + text + "' (want plain, odds or opportunity:<label>)");
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> alphas;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      alphas.push_back(fairot::decode_double(text.substr(start, i - start), "--alphas"));
      start = i + 1;
    }
  }
  if (alphas.empty()) throw InputError("--alphas: empty grid");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= 0.0 && alphas[i] <= 1.0)) {
      throw InputError("--alphas: values must lie in [0, 1]");
    }
    if (i > 0 && alphas[i] < alphas[i - 1]) {
      throw InputError("--alphas: grid must be sorted ascending");
    }
  }
  return alphas;
}

std::vector<double> flat_outputs(const GroupedDataset& data) {
  std::vector<double> flat;
  flat.reserve(data.size() * data.dimension());
  for (const auto& rec : data.records()) {
    flat.insert(flat.end(), rec.output.begin(), rec.output.end());
  }
  return flat;
}

std::vector<std::string> group_column(const GroupedDataset& data) {
  std::vector<std::string> groups;
  groups.reserve(data.size());
  for (const auto& rec : data.records()) groups.push_back(rec.group);
  return groups;
}

// Applies the fitted document to every record; the in-sample branch is
// decided per record by exact support match.
std::pair<std::vector<double>, std::vector<bool>> transform_all(const ModelDocument& model,
                                                                const GroupedDataset& data,
                                                                double alpha, double bandwidth) {
  if (data.dimension() != model.dimension()) {
    throw InputError("model dimension " + std::to_string(model.dimension()) +
                     " does not match data dimension " + std::to_string(data.dimension()));
  }
  std::vector<double> processed;
  processed.reserve(data.size() * data.dimension());
  std::vector<bool> in_sample(data.size(), false);
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto& rec = data.records()[r];
    std::pair<std::vector<double>, bool> out;
    if (model.plain) {
      out = model.plain->transform(rec.group, rec.output, alpha, bandwidth);
    } else {
      out = model.equalized->transform(rec.group, rec.output, fairot::argmax_label(rec.output),
                                       alpha, bandwidth);
    }
    processed.insert(processed.end(), out.first.begin(), out.first.end());
    in_sample[r] = out.second;
  }
  return {std::move(processed), std::move(in_sample)};
}

FairnessReport make_report(const GroupedDataset& original, const std::vector<double>& processed,
                           std::optional<double> alpha, std::size_t oracle_cap) {
  const std::size_t k = original.dimension();
  FairnessReport report;
  report.alpha = alpha;
  report.group_ids = original.groups();
  report.error_r = fairot::approximation_error(flat_outputs(original), processed, k);

  const auto by_group = original.indices_by_group();
  std::vector<fairot::DiscreteDistribution> groups;
  groups.reserve(by_group.size());
  for (const auto& indices : by_group) {
    std::vector<double> flat;
    flat.reserve(indices.size() * k);
    for (const std::size_t r : indices) {
      flat.insert(flat.end(), processed.begin() + r * k, processed.begin() + (r + 1) * k);
    }
    groups.push_back(fairot::DiscreteDistribution::uniform(std::move(flat), k));
  }
  const auto u = fairot::unfairness(groups, fairot::size_proportional_weights(groups), oracle_cap);
  report.unfairness_u = u.value;
  report.exact_barycenter = u.exact_barycenter;
  report.pairwise_w2 = fairot::pairwise_w2(groups);
  if (k >= 2) {
    report.dp_gap = fairot::multiclass_dp_gap(processed, k, group_column(original));
  }
  return report;
}

GroupedDataset replace_outputs(const GroupedDataset& data, const std::vector<double>& processed) {
  std::vector<fairot::Record> records = data.records();
  const std::size_t k = data.dimension();
  for (std::size_t r = 0; r < records.size(); ++r) {
    records[r].output.assign(processed.begin() + r * k, processed.begin() + (r + 1) * k);
  }
  return GroupedDataset(std::move(records));
}

int run(int argc, char** argv) {
  CLI::App app{"Distribution-aligning post-processing for multi-output models"};
  app.require_subcommand(1);
  // --h is the bandwidth flag, so help has no short name anywhere
  app.set_help_flag("--help", "Print help and exit");

  const auto add_subcommand = [&app](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "Print help and exit");
    return sub;
  };

  // synth
  auto* synth = add_subcommand("synth", "Generate a synthetic scenario CSV");
  std::string synth_scenario = "figure1";
  std::size_t synth_n = 500;
  std::uint64_t synth_seed = 0;
  std::string synth_output;
  synth->add_option("--scenario", synth_scenario, "figure1, multiclass or multilabel");
  synth->add_option("--n", synth_n, "records per group (>= 10)");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--output", synth_output, "output CSV path")->required();

  // fit
  auto* fit_cmd = add_subcommand("fit", "Fit a post-processing model on a dataset CSV");
  std::string fit_input, fit_model, fit_mode = "barycentric", fit_notion = "plain";
  std::uint64_t fit_seed = 0;
  double fit_h = -1.0;
  fit_cmd->add_option("--input", fit_input, "training CSV")->required();
  fit_cmd->add_option("--model", fit_model, "model document to write")->required();
  fit_cmd->add_option("--mode", fit_mode, "barycentric or stochastic");
  fit_cmd->add_option("--seed", fit_seed, "seed for stochastic targets");
  fit_cmd->add_option("--h", fit_h, "default bandwidth stored in the model");
  fit_cmd->add_option("--notion", fit_notion, "plain, odds or opportunity:<label>");

  // transform
  auto* transform = add_subcommand("transform", "Apply a fitted model to a dataset CSV");
  std::string tr_model, tr_input, tr_output;
  double tr_alpha = 1.0, tr_h = -1.0;
  transform->add_option("--model", tr_model, "model document")->required();
  transform->add_option("--input", tr_input, "input CSV")->required();
  transform->add_option("--output", tr_output, "output CSV")->required();
  transform->add_option("--alpha", tr_alpha, "interpolation weight in [0, 1]");
  transform->add_option("--h", tr_h, "bandwidth override for out-of-sample records");

  // evaluate
  auto* evaluate = add_subcommand("evaluate", "Fairness report for processed outputs");
  std::string ev_original, ev_processed, ev_output;
  double ev_alpha = -1.0;
  std::size_t ev_cap = fairot::kDefaultOracleCap;
  evaluate->add_option("--input", ev_original, "original CSV")->required();
  evaluate->add_option("--processed", ev_processed, "processed CSV")->required();
  evaluate->add_option("--output", ev_output, "report JSON to write")->required();
  evaluate->add_option("--alpha", ev_alpha, "alpha to record in the report");
  evaluate->add_option("--oracle-cap", ev_cap, "tuple-space cap for the exact barycenter");

  // sweep
  auto* sweep = add_subcommand("sweep", "Pareto sweep over an alpha grid");
  std::string sw_model, sw_input, sw_output, sw_alphas = "0,0.2,0.4,0.6,0.8,1";
  double sw_h = -1.0;
  std::size_t sw_cap = fairot::kDefaultOracleCap;
  sweep->add_option("--model", sw_model, "model document")->required();
  sweep->add_option("--input", sw_input, "evaluation CSV")->required();
  sweep->add_option("--output", sw_output, "Pareto CSV to write")->required();
  sweep->add_option("--alphas", sw_alphas, "comma-separated ascending alpha grid");
  sweep->add_option("--h", sw_h, "bandwidth override");
  sweep->add_option("--oracle-cap", sw_cap, "tuple-space cap for the exact barycenter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // 0 for --help/--version
    return code == 0 ? 0 : 2;
  }

  if (synth->parsed()) {
    const GroupedDataset data = fairot::run_synth(synth_scenario, synth_n, synth_seed);
    fairot::write_csv(synth_output, data);
    std::cout << "wrote " << data.size() << " records (" << data.groups().size() << " groups, k="
              << data.dimension() << ") to " << synth_output << "\n";
    return 0;
  }

  if (fit_cmd->parsed()) {
    const auto t0 = std::chrono::steady_clock::now();
    const GroupedDataset data = fairot::ingest_csv(fit_input);
    const fairot::TransportMode mode = fairot::transport_mode_from_string(fit_mode);
    std::optional<double> h;
    if (fit_h > 0.0) h = fit_h;
    const NotionSpec notion = parse_notion(fit_notion);
    if (notion.plain) {
      const fairot::FittedPostprocessor model = fairot::fit(data, mode, fit_seed, h);
      fairot::save_model(fit_model, model);
      for (const auto& g : model.groups()) {
        std::cout << "group " << g.id << ": n=" << g.supports.size() / model.dimension()
                  << " weight=" << fairot::encode_double(g.weight) << "\n";
      }
      std::cout << "reference objective: " << fairot::encode_double(model.reference_objective())
                << "\n";
    } else {
      const fairot::EqualizedPostprocessor model =
          fairot::fit_equalized(data, notion.notion, mode, fit_seed, h);
      fairot::save_model(fit_model, model);
      for (const auto& [label, sub] : model.per_label()) {
        std::cout << "label " << label << ": reference objective "
                  << fairot::encode_double(sub.reference_objective()) << "\n";
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "fit took " << std::chrono::duration<double>(t1 - t0).count() << " s\n";
    return 0;
  }

  if (transform->parsed()) {
    const ModelDocument model = fairot::load_model(tr_model);
    const GroupedDataset data = fairot::ingest_csv(tr_input);
    const double h = tr_h > 0.0 ? tr_h : model.bandwidth();
    const auto [processed, in_sample] = transform_all(model, data, tr_alpha, h);
    fairot::write_csv(tr_output, replace_outputs(data, processed), &in_sample);
    std::size_t hits = 0;
    for (const bool b : in_sample) hits += b ? 1 : 0;
    std::cout << "transformed " << data.size() << " records (" << hits << " in-sample) to "
              << tr_output << "\n";
    return 0;
  }

  if (evaluate->parsed()) {
    const GroupedDataset original = fairot::ingest_csv(ev_original);
    const GroupedDataset processed = fairot::ingest_csv(ev_processed);
    if (original.size() != processed.size()) {
      throw InputError("evaluate: row counts differ (" + std::to_string(original.size()) + " vs " +
                       std::to_string(processed.size()) + ")");
    }
    if (original.dimension() != processed.dimension()) {
      throw InputError("evaluate: output dimensions differ");
    }
    for (std::size_t r = 0; r < original.size(); ++r) {
      if (original.records()[r].group != processed.records()[r].group) {
        throw InputError("evaluate: group mismatch at data row " + std::to_string(r + 1));
      }
    }
    const std::optional<double> alpha =
        ev_alpha >= 0.0 ? std::optional<double>(ev_alpha) : std::nullopt;
    const FairnessReport report =
        make_report(original, flat_outputs(processed), alpha, ev_cap);
    fairot::save_report(ev_output, report);
    std::cout << "U=" << fairot::encode_double(report.unfairness_u)
              << " R=" << fairot::encode_double(report.error_r)
              << " barycenter=" << (report.exact_barycenter ? "exact" : "approximate");
    if (report.dp_gap) std::cout << " dp_gap=" << fairot::encode_double(*report.dp_gap);
    std::cout << "\n";
    return 0;
  }

  if (sweep->parsed()) {
    const ModelDocument model = fairot::load_model(sw_model);
    const GroupedDataset data = fairot::ingest_csv(sw_input);
    const std::vector<double> alphas = parse_alpha_list(sw_alphas);
    const double h = sw_h > 0.0 ? sw_h : model.bandwidth();
    std::ofstream out(sw_output, std::ios::binary);
    if (!out) throw InputError("cannot write '" + sw_output + "'");
    out << "alpha,U,R,dp_gap\n";
    for (const double alpha : alphas) {
      const auto [processed, in_sample] = transform_all(model, data, alpha, h);
      const FairnessReport report = make_report(data, processed, alpha, sw_cap);
      out << fairot::encode_double(alpha) << ',' << fairot::encode_double(report.unfairness_u)
          << ',' << fairot::encode_double(report.error_r) << ',';
      if (report.dp_gap) out << fairot::encode_double(*report.dp_gap);
      out << "\n";
      std::cout << "alpha=" << fairot::encode_double(alpha)
                << " U=" << fairot::encode_double(report.unfairness_u)
                << " R=" << fairot::encode_double(report.error_r) << "\n";
    }
    if (!out) throw InputError("failed while writing '" + sw_output + "'");
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fairot::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fairot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
