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
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lsk/config.h"
#include "lsk/dataset.h"
#include "lsk/gateway.h"
#include "lsk/report.h"
#include "lsk/synthetic.h"

namespace lsk {

// On-disk layout under RunConfig::output_dir.
struct RunPaths {
  std::filesystem::path root;
  std::string dataset;  // file-safe dataset name
  std::string run;      // "<dataset>__<model>"

  explicit RunPaths(const RunConfig& config);
  RunPaths(std::filesystem::path root, std::string dataset, std::string run)
      : root(std::move(root)), dataset(std::move(dataset)), run(std::move(run)) {}

  std::filesystem::path Translation(Language lang) const;  // translations/<code>.jsonl
  std::filesystem::path TranslationJournal(Language lang) const;
  std::filesystem::path RunDir() const;  // runs/<run>/
  std::filesystem::path SelectionFile() const;   // selection/<run>.json
  std::filesystem::path EmbeddingsFile() const;  // embeddings/<dataset>.json
  std::filesystem::path ClusterModelFile(std::size_t k) const;  // models/<run>__k<k>.json
  std::filesystem::path GlobalChoiceFile() const;  // models/<run>__global.json
  std::filesystem::path ReportFile(ReportFormat format) const;  // reports/<run>.<ext>
  std::filesystem::path LockFile() const;
};

// Exclusive advisory lock on the output directory; released on destruction.
// Throws Error(kIo) if another process holds it.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& path);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  int fd_ = -1;
};

struct StageOptions {
  bool dry_run = false;
  bool resume = true;
  // Restricts infer to these languages; empty means all configured.
  std::vector<Language> languages;
  std::shared_ptr<HttpTransport> transport;  // null: real HTTP
  std::ostream* log = nullptr;               // null: silent
};

struct StageResult {
  bool complete = true;
  std::size_t planned_calls = 0;   // work items needing the network
  std::size_t network_calls = 0;   // endpoint requests issued
  std::size_t succeeded = 0;
  std::size_t transport_failures = 0;
  std::vector<std::string> failures;  // human-readable, one per failed unit
  std::vector<std::filesystem::path> outputs;
};

// Source items for the configured dataset (claims are reformatted with the
// split seed).
std::vector<McqItem> LoadSourceItems(const RunConfig& config);
Split SplitForConfig(const RunConfig& config, const std::vector<McqItem>& items);

// Items in `lang`: the source items for the source language, otherwise the
// translated file (required).
std::vector<McqItem> LoadLanguageItems(const RunConfig& config,
                                       const std::vector<McqItem>& source, Language lang);

StageResult RunTranslate(const RunConfig& config, const StageOptions& options);
StageResult RunInfer(const RunConfig& config, const StageOptions& options);
StageResult RunSelectLlm(const RunConfig& config, const StageOptions& options);
StageResult RunEmbed(const RunConfig& config, const StageOptions& options);

struct EvaluationRun {
  EvaluationReport report;
  StageResult stage;
};
EvaluationRun RunEvaluate(const RunConfig& config, const StageOptions& options);

// Re-emits csv and markdown from the stored json report.
StageResult RunReport(const RunConfig& config, const StageOptions& options);

// Writes a synthetic dataset, store, embedding cache and report under
// `output_dir`.
EvaluationRun RunSimulate(const SyntheticSpec& spec, const SimulationOptions& sim,
                          const std::filesystem::path& output_dir, const StageOptions& options);

}  // namespace lsk
