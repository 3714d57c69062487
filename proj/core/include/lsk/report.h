// Copyright 2026 The LSK Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/fraction.h"
#include "lsk/language.h"
#include "lsk/lsk.h"
#include "lsk/selectors.h"

namespace lsk {

// Correct over total for a non-empty outcome.
Fraction ComputeAccuracy(const SelectorOutcome& outcome);

struct LanguageCounts {
  std::vector<std::pair<Language, std::size_t>> counts;  // canonical order, zero counts omitted
  std::size_t unselected = 0;  // items with no chosen language

  bool operator==(const LanguageCounts&) const = default;
};

// Chosen-language histogram. Majority outcomes carry no single language and
// yield an all-unselected result.
LanguageCounts LanguageDistribution(const SelectorOutcome& outcome);

struct HeatmapRow {
  std::size_t cluster = 0;
  Language expert = Language::kEn;
  std::size_t members = 0;
  std::vector<Fraction> accuracy;  // per model.languages, canonical order

  bool operator==(const HeatmapRow&) const = default;
};

std::vector<HeatmapRow> ClusterHeatmap(const ClusterModel& model);

struct StrategyAccuracy {
  Strategy strategy = Strategy::kOracle;
  std::size_t correct = 0;
  std::size_t total = 0;

  Fraction accuracy() const { return Fraction::Of(correct, total); }
  bool operator==(const StrategyAccuracy&) const = default;
};

struct EvaluationReport {
  std::string dataset_id;
  std::string model_name;
  std::vector<Language> languages;
  std::size_t test_size = 0;
  std::vector<StrategyAccuracy> accuracy;  // AllStrategies() order, present ones only
  std::optional<Language> global_language;
  std::vector<std::pair<Strategy, LanguageCounts>> language_distribution;
  std::vector<Language> heatmap_languages;
  std::vector<HeatmapRow> cluster_heatmap;
  std::vector<std::pair<std::size_t, Fraction>> cluster_size_sweep;
  std::optional<Fraction> verification_rate;
  std::vector<std::pair<Strategy, std::string>> skipped;  // strategy, reason
  std::vector<std::string> notes;
  nlohmann::json config_snapshot = nlohmann::json::object();
  nlohmann::json ground_truth;  // null unless simulated

  bool operator==(const EvaluationReport&) const = default;
};

struct ReportInputs {
  std::string dataset_id;
  std::string model_name;
  std::vector<Language> languages;
  std::vector<SelectorOutcome> outcomes;
  const GlobalChoice* global = nullptr;
  const ClusterModel* cluster_model = nullptr;
  std::vector<std::pair<std::size_t, Fraction>> sweep;
  std::optional<Fraction> verification_rate;
  std::vector<std::pair<Strategy, std::string>> skipped;
  std::vector<std::string> notes;
  nlohmann::json config_snapshot = nlohmann::json::object();
  nlohmann::json ground_truth;
};

// Assembles the report. Throws Error(kInvariant) if any strategy beats the
// oracle or outcomes disagree on the test size, and Error(kInvalidArgument)
// on an empty outcome.
EvaluationReport BuildReport(const ReportInputs& inputs);

enum class ReportFormat { kJson, kCsv, kMarkdown };

// "json", "csv", "markdown" (or "md"). Throws Error(kInvalidArgument) otherwise.
ReportFormat ParseReportFormat(std::string_view name);
std::string_view ReportFormatExtension(ReportFormat format);

// Byte-deterministic rendering; ratios print with 4 decimals.
std::string Emit(const EvaluationReport& report, ReportFormat format);

nlohmann::json ToJson(const EvaluationReport& report);
EvaluationReport EvaluationReportFromJson(const nlohmann::json& j);

}  // namespace lsk
