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

#include "lsk/pipeline.h"

#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "lsk/error.h"
#include "lsk/io.h"
#include "lsk/store.h"
#include "support/stub_server.h"

namespace lsk {
namespace {

namespace fs = std::filesystem;
using testing::FakeTransport;
using testing::ScriptedModel;
using testing::StubHandler;
using testing::TestEndpoint;

constexpr std::size_t kItems = 40;

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("lsk_pipeline_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig MakeConfig(const fs::path& dir) {
  std::vector<McqItem> items;
  for (std::size_t i = 0; i < kItems; ++i) {
    const std::string n = std::to_string(i);
    items.push_back(MakeItem(DatasetId::kCustom, "Question number " + n + "?",
                             {"alpha " + n, "beta " + n, "gamma " + n, "delta " + n},
                             "ABCD"[i % 4]));
  }
  WriteFileAtomic(dir / "items.jsonl", SerializeDataset(items));
  RunConfig c;
  c.dataset_path = dir / "items.jsonl";
  c.languages = {Language::kEn, Language::kFr, Language::kTr};
  c.chat = TestEndpoint("http://stub.invalid/v1");
  c.embedding = TestEndpoint("http://stub.invalid/v1", "stub-embed");
  c.k_values = {2, 1};
  c.output_dir = dir / "out";
  return c;
}

StageOptions With(std::shared_ptr<HttpTransport> transport) {
  StageOptions o;
  o.transport = std::move(transport);
  return o;
}

TEST(PipelineTest, EndToEndWithResume) {
  const fs::path dir = TempDir("e2e");
  const RunConfig config = MakeConfig(dir);
  auto transport = std::make_shared<FakeTransport>(ScriptedModel("Turkish"));
  const StageOptions options = With(transport);

  StageResult t = RunTranslate(config, options);
  EXPECT_TRUE(t.complete);
  EXPECT_EQ(t.planned_calls, 2 * kItems);
  EXPECT_EQ(t.network_calls, 2 * kItems * 5);  // question plus four choices
  EXPECT_TRUE(fs::exists(RunPaths(config).Translation(Language::kTr)));
  const auto turkish = LoadLanguageItems(config, LoadSourceItems(config), Language::kTr);
  EXPECT_EQ(turkish[0].question.rfind("[tr] ", 0), 0u);

  StageResult infer = RunInfer(config, options);
  EXPECT_TRUE(infer.complete);
  EXPECT_EQ(infer.planned_calls, 3 * kItems);
  EXPECT_EQ(infer.network_calls, 3 * kItems);
  EXPECT_EQ(infer.succeeded, 3 * kItems);

  StageResult select = RunSelectLlm(config, options);
  EXPECT_TRUE(select.complete);
  EXPECT_EQ(select.succeeded, SplitForConfig(config, LoadSourceItems(config)).test.size());
  StageResult embed = RunEmbed(config, options);
  EXPECT_EQ(embed.planned_calls, kItems);

  // A second pass finds everything cached.
  const std::size_t before = transport->request_count();
  EXPECT_EQ(RunTranslate(config, options).planned_calls, 0u);
  EXPECT_EQ(RunInfer(config, options).planned_calls, 0u);
  EXPECT_EQ(RunSelectLlm(config, options).planned_calls, 0u);
  EXPECT_EQ(RunEmbed(config, options).planned_calls, 0u);
  EXPECT_EQ(transport->request_count(), before);

  EvaluationRun eval = RunEvaluate(config, options);
  EXPECT_TRUE(eval.stage.complete);
  const EvaluationReport& r = eval.report;
  EXPECT_EQ(r.test_size, 8u);
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.skipped[0].first, Strategy::kCountry);
  EXPECT_EQ(r.accuracy.size(), AllStrategies().size() - 1);
  EXPECT_EQ(r.cluster_size_sweep.size(), 2u);
  for (const auto& [s, counts] : r.language_distribution) {
    if (s == Strategy::kLlmSelected) {
      EXPECT_EQ(counts.counts,
                (std::vector<std::pair<Language, std::size_t>>{{Language::kTr, 8}}));
    }
  }
  EXPECT_EQ(transport->request_count(), before);

  const fs::path csv = RunPaths(config).ReportFile(ReportFormat::kCsv);
  const std::string csv_before = ReadFile(csv);
  fs::remove(csv);
  RunReport(config, options);
  EXPECT_EQ(ReadFile(csv), csv_before);
  EXPECT_EQ(RunEvaluate(config, options).report, r);
}

TEST(PipelineTest, InterruptedInferResumesWithoutDuplicates) {
  const fs::path dir = TempDir("interrupt");
  RunConfig config = MakeConfig(dir);
  config.languages = {Language::kEn};
  const StubHandler good = ScriptedModel();
  std::mutex mu;
  std::size_t served = 0;
  std::multiset<std::string> prompts;  // answered prompts across both runs
  auto flaky = std::make_shared<FakeTransport>(
      [&](const std::string& path, const std::string& body) -> std::pair<int, std::string> {
        std::lock_guard<std::mutex> guard(mu);
        if (served >= 15) return {503, "{}"};
        ++served;
        prompts.insert(testing::PromptOf(body));
        return good(path, body);
      });
  StageResult first = RunInfer(config, With(flaky));
  EXPECT_FALSE(first.complete);
  EXPECT_EQ(first.succeeded, 15u);
  EXPECT_EQ(first.transport_failures, kItems - 15);

  auto healthy = std::make_shared<FakeTransport>(good);
  StageResult second = RunInfer(config, With(healthy));
  EXPECT_TRUE(second.complete);
  EXPECT_EQ(second.planned_calls, kItems - 15);
  EXPECT_EQ(healthy->request_count(), kItems - 15);

  for (const auto& b : healthy->bodies()) prompts.insert(testing::PromptOf(b));
  EXPECT_EQ(prompts.size(), kItems);
  EXPECT_EQ(std::set<std::string>(prompts.begin(), prompts.end()).size(), kItems);

  RunStore store(RunPaths(config).RunDir());
  const auto built = BuildMatrix(store.Snapshot(), LoadSourceItems(config),
                                 config.chat->model_name, config.languages);
  EXPECT_EQ(CountCells(built.matrix).missing, 0u);
}

TEST(PipelineTest, DryRunMakesNoCalls) {
  const fs::path dir = TempDir("dry");
  const RunConfig config = MakeConfig(dir);
  auto transport = std::make_shared<FakeTransport>(ScriptedModel());
  StageOptions options = With(transport);
  options.dry_run = true;
  std::ostringstream log;
  options.log = &log;
  EXPECT_EQ(RunTranslate(config, options).planned_calls, 2 * kItems);
  EXPECT_EQ(RunEmbed(config, options).planned_calls, kItems);
  EXPECT_EQ(transport->request_count(), 0u);
  EXPECT_NE(log.str().find("would call"), std::string::npos);
}

TEST(PipelineTest, InferArgumentChecks) {
  const fs::path dir = TempDir("args");
  const RunConfig config = MakeConfig(dir);
  StageOptions options = With(std::make_shared<FakeTransport>(ScriptedModel()));
  options.resume = false;
  EXPECT_THROW(RunInfer(config, options), Error);
  options.resume = true;
  options.languages = {Language::kJa};
  EXPECT_THROW(RunInfer(config, options), Error);
  options.languages = {Language::kFr};
  try {
    RunInfer(config, options);  // untranslated
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotFound);
  }
  EXPECT_THROW(RunEvaluate(config, options), Error);
  EXPECT_THROW(RunReport(config, options), Error);
}

TEST(PipelineTest, AuthFailureAborts) {
  const fs::path dir = TempDir("auth");
  RunConfig config = MakeConfig(dir);
  config.languages = {Language::kEn};
  auto denied = std::make_shared<FakeTransport>(
      [](const std::string&, const std::string&) { return std::pair<int, std::string>(401, "{}"); });
  try {
    RunInfer(config, With(denied));
    FAIL();
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kAuth);
  }
}

TEST(PipelineTest, RunLockIsExclusive) {
  const fs::path dir = TempDir("lock");
  const RunConfig config = MakeConfig(dir);
  {
    RunLock held(RunPaths(config).LockFile());
    try {
      RunInfer(config, With(std::make_shared<FakeTransport>(ScriptedModel())));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kIo);
    }
  }
  RunLock again(RunPaths(config).LockFile());
}

TEST(PipelineTest, SimulateWritesArtifacts) {
  const fs::path dir = TempDir("simulate");
  SyntheticSpec spec;
  spec.n_items = 200;
  spec.k_true = 2;
  spec.dim = 4;
  spec.languages = {Language::kEn, Language::kDe, Language::kJa};
  SimulationOptions sim;
  sim.k_values = {2};
  const EvaluationRun a = RunSimulate(spec, sim, dir / "a", {});
  const EvaluationRun b = RunSimulate(spec, sim, dir / "b", {});
  EXPECT_EQ(a.report, b.report);
  EXPECT_EQ(a.report.test_size, 40u);
  EXPECT_EQ(a.report.accuracy.size(), AllStrategies().size());
  for (const auto& out : a.stage.outputs) EXPECT_TRUE(fs::exists(out)) << out;
  const RunPaths paths(dir / "a", "synthetic", "synthetic__synthetic");
  EXPECT_EQ(ReadFile(paths.ReportFile(ReportFormat::kCsv)),
            ReadFile(RunPaths(dir / "b", "synthetic", "synthetic__synthetic")
                         .ReportFile(ReportFormat::kCsv)));
}

}  // namespace
}  // namespace lsk
