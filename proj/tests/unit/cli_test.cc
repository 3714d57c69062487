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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lsk/dataset.h"
#include "lsk/io.h"
#include "support/stub_server.h"

namespace lsk {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult RunCli(const std::string& args) {
  const std::string command = std::string(LSKCTL_PATH) + " " + args + " 2>&1";
  CommandResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("lsk_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Writes a four-item English dataset and a config pointing at `base_url`.
fs::path WriteConfig(const fs::path& dir, const std::string& base_url) {
  std::vector<McqItem> items;
  for (int i = 0; i < 4; ++i) {
    items.push_back(MakeItem(DatasetId::kCustom, "Q" + std::to_string(i) + "?",
                             {"a", "b", "c", "d"}, 'A'));
  }
  WriteFileAtomic(dir / "items.jsonl", SerializeDataset(items));
  const json endpoint = {{"base_url", base_url}, {"model", "stub-model"}, {"max_retries", 0},
                         {"timeout_s", 2}, {"initial_backoff_ms", 1}, {"max_in_flight", 1}};
  const json config = {{"dataset", {{"path", "items.jsonl"}}},
                       {"languages", "en"},
                       {"chat", endpoint},
                       {"output_dir", "out"}};
  WriteFileAtomic(dir / "run.json", config.dump(2));
  return dir / "run.json";
}

TEST(CliTest, HelpListsSubcommands) {
  const CommandResult r = RunCli("--help");
  EXPECT_EQ(r.exit_code, 0);
  for (const char* sub : {"translate", "infer", "select-llm", "embed", "evaluate", "report",
                          "simulate"}) {
    EXPECT_NE(r.output.find(sub), std::string::npos) << sub;
  }
  EXPECT_NE(RunCli("no-such-command").exit_code, 0);
}

TEST(CliTest, SimulateSucceeds) {
  const fs::path dir = TempDir("simulate");
  WriteFileAtomic(dir / "spec.json",
                  R"({"n_items": 120, "k_true": 2, "dim": 4, "languages": ["en", "fr"]})");
  const CommandResult r = RunCli("simulate --spec " + (dir / "spec.json").string() +
                                 " --output " + (dir / "out").string() + " --k 2");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("oracle\t"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "reports" / "synthetic__synthetic.csv"));
}

TEST(CliTest, BadConfigExitsTwo) {
  const fs::path dir = TempDir("bad_config");
  WriteFileAtomic(dir / "run.json", R"({"dataset": {"path": "missing.jsonl"}})");
  EXPECT_EQ(RunCli("infer --config " + (dir / "run.json").string()).exit_code, 2);
  WriteFileAtomic(dir / "broken.json", "{");
  EXPECT_EQ(RunCli("infer --config " + (dir / "broken.json").string()).exit_code, 2);
}

TEST(CliTest, UnreachableEndpointExitsFour) {
  const fs::path dir = TempDir("unreachable");
  testing::StubServer server(testing::ScriptedModel());
  const std::string url = server.base_url();
  server.Stop();
  const CommandResult r = RunCli("infer --config " + WriteConfig(dir, url).string());
  EXPECT_EQ(r.exit_code, 4) << r.output;
}

TEST(CliTest, PartialResultsExitThreeThenResumeCompletes) {
  const fs::path dir = TempDir("partial");
  const testing::StubHandler good = testing::ScriptedModel();
  std::mutex mu;
  int served = 0;
  bool healthy = false;
  testing::StubServer server([&](const std::string& path, const std::string& body) {
    std::lock_guard<std::mutex> guard(mu);
    if (!healthy && served >= 2) return std::pair<int, std::string>(503, "{}");
    ++served;
    return good(path, body);
  });
  const fs::path config = WriteConfig(dir, server.base_url());
  const CommandResult first = RunCli("infer --config " + config.string());
  EXPECT_EQ(first.exit_code, 3) << first.output;
  {
    std::lock_guard<std::mutex> guard(mu);
    healthy = true;
  }
  const CommandResult second = RunCli("infer --config " + config.string());
  EXPECT_EQ(second.exit_code, 0) << second.output;
  EXPECT_EQ(served, 4);
  EXPECT_EQ(RunCli("evaluate --config " + config.string()).exit_code, 0);
}

}  // namespace
}  // namespace lsk
