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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsk/dataset.h"
#include "lsk/gateway.h"
#include "lsk/language.h"

namespace lsk {

enum class DatasetFormat {
  kMcq,     // line-delimited MCQ records
  kClaims,  // line-delimited {country, claim, label}; reformatted on load
};

// One pipeline run. Relative paths resolve against the config file's
// directory.
struct RunConfig {
  std::filesystem::path dataset_path;
  DatasetId dataset_id = DatasetId::kCustom;
  DatasetFormat dataset_format = DatasetFormat::kMcq;
  std::vector<Language> languages;  // canonical order

  std::optional<ModelEndpoint> chat;
  std::optional<ModelEndpoint> translation;  // defaults to chat
  std::optional<ModelEndpoint> embedding;

  std::uint64_t split_seed = 0;
  // Explicit counts win; otherwise train_fraction of the items train and the
  // rest test.
  std::optional<std::size_t> train_count;
  std::optional<std::size_t> test_count;
  double train_fraction = 0.8;

  std::vector<std::size_t> k_values = {12};
  // k-means seeds; the fit with the lowest inertia is kept.
  std::vector<std::uint64_t> seeds = {0};

  std::optional<std::filesystem::path> country_map;
  std::optional<std::filesystem::path> templates_dir;
  std::filesystem::path output_dir = "lsk_out";
  bool verify_language = true;

  // Throws Error(kInvalidArgument) naming the offending key.
  void Validate() const;

  const ModelEndpoint& ChatEndpoint() const;
  const ModelEndpoint& TranslationEndpoint() const;
  const ModelEndpoint& EmbeddingEndpoint() const;

  // "<dataset>__<model>" with path-unsafe characters replaced.
  std::string RunName() const;
};

ModelEndpoint ModelEndpointFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const ModelEndpoint& endpoint);

// Parses a config document; `${VAR}` references are expanded first.
RunConfig RunConfigFromJson(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Reproducibility snapshot; holds key variable names, never key values.
nlohmann::json ToJson(const RunConfig& config);

// Replaces characters outside [A-Za-z0-9._-] with '_'.
std::string SafeFileComponent(std::string_view s);

}  // namespace lsk
