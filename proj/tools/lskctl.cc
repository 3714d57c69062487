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

// Pipeline driver: one subcommand per stage.
//
// Exit codes: 0 complete, 1 unexpected failure, 2 configuration error,
// 3 partial or missing data, 4 endpoint failure (auth, bad request, or
// every attempted call failed in transport).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lsk/config.h"
#include "lsk/error.h"
#include "lsk/io.h"
#include "lsk/language.h"
#include "lsk/pipeline.h"
#include "lsk/synthetic.h"

namespace {

constexpr int kExitComplete = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;
constexpr int kExitEndpoint = 4;

struct Flags {
  std::string config;
  std::string languages;
  std::vector<std::size_t> k;
  std::vector<std::uint64_t> seeds;
  bool resume = true;
  bool dry_run = false;
  std::string spec;
  std::string output = "lsk_simulation";
  std::uint64_t split_seed = 0;
};

int ExitCodeFor(const lsk::Error& e) {
  switch (e.kind()) {
    case lsk::ErrorKind::kInvalidArgument:
    case lsk::ErrorKind::kParse:
      return kExitConfig;
    case lsk::ErrorKind::kNotFound:
    case lsk::ErrorKind::kDegenerate:
      return kExitPartial;
    case lsk::ErrorKind::kAuth:
    case lsk::ErrorKind::kBadRequest:
    case lsk::ErrorKind::kTransport:
      return kExitEndpoint;
    case lsk::ErrorKind::kIo:
    case lsk::ErrorKind::kInvariant:
      return kExitUnexpected;
  }
  return kExitUnexpected;
}

int ExitCodeFor(const lsk::StageResult& r) {
  if (r.complete) return kExitComplete;
  const std::size_t attempted = r.succeeded + r.transport_failures;
  if (attempted > 0 && r.succeeded == 0 && r.transport_failures > 0) return kExitEndpoint;
  return kExitPartial;
}

void PrintSummary(const std::string& stage, const lsk::StageResult& r) {
  std::cerr << stage << ": planned " << r.planned_calls << ", network calls " << r.network_calls
            << ", ok " << r.succeeded << ", failed " << r.failures.size() << "\n";
  for (const auto& f : r.failures) std::cerr << "  failed: " << f << "\n";
  for (const auto& p : r.outputs) std::cerr << "  wrote " << p.string() << "\n";
}

lsk::RunConfig LoadConfig(const Flags& flags) {
  if (flags.config.empty()) {
    throw lsk::Error(lsk::ErrorKind::kInvalidArgument, "--config is required");
  }
  lsk::RunConfig config = lsk::LoadRunConfig(flags.config);
  if (!flags.languages.empty()) {
    config.languages = lsk::CanonicalSorted(lsk::ParseLanguageList(flags.languages));
  }
  if (!flags.k.empty()) config.k_values = flags.k;
  if (!flags.seeds.empty()) config.seeds = flags.seeds;
  config.Validate();
  return config;
}

lsk::StageOptions Options(const Flags& flags) {
  lsk::StageOptions options;
  options.dry_run = flags.dry_run;
  options.resume = flags.resume;
  options.log = &std::cerr;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lskctl: multilingual reasoning-language selection pipeline"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "Run configuration (JSON)");
    cmd->add_option("--languages", flags.languages, "Comma-separated language codes");
    cmd->add_option("--k", flags.k, "Cluster counts, e.g. --k 12 24 48");
    cmd->add_option("--seed", flags.seeds, "k-means seeds (best inertia kept)");
    cmd->add_flag("--resume,!--no-resume", flags.resume, "Reuse completed work (default on)");
    cmd->add_flag("--dry-run", flags.dry_run, "Print planned network calls and exit");
  };

  auto* translate = app.add_subcommand("translate", "Translate the dataset into each language");
  auto* infer = app.add_subcommand("infer", "Fill missing (item, language) answers");
  auto* select = app.add_subcommand("select-llm", "Ask the model to pick a language per test item");
  auto* embed = app.add_subcommand("embed", "Embed every item for clustering");
  auto* evaluate = app.add_subcommand("evaluate", "Score every strategy and write reports");
  auto* report = app.add_subcommand("report", "Re-render csv/markdown from the json report");
  auto* simulate = app.add_subcommand("simulate", "Run the pipeline on planted synthetic data");
  for (auto* cmd : {translate, infer, select, embed, evaluate, report}) add_common(cmd);
  simulate->add_option("--spec", flags.spec, "Synthetic spec (JSON); defaults when omitted");
  simulate->add_option("--output", flags.output, "Output directory");
  simulate->add_option("--k", flags.k, "Cluster counts");
  simulate->add_option("--seed", flags.seeds, "k-means seeds (best inertia kept)");
  simulate->add_option("--split-seed", flags.split_seed, "Train/test split seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      lsk::SyntheticSpec spec;
      if (!flags.spec.empty()) {
        auto j = nlohmann::json::parse(lsk::ReadFile(flags.spec), nullptr, false);
        if (j.is_discarded()) {
          throw lsk::Error(lsk::ErrorKind::kInvalidArgument, "spec is not valid JSON");
        }
        spec = lsk::SyntheticSpecFromJson(j);
      }
      lsk::SimulationOptions sim;
      if (!flags.k.empty()) sim.k_values = flags.k;
      if (!flags.seeds.empty()) sim.kmeans_seeds = flags.seeds;
      sim.split_seed = flags.split_seed;
      const auto run = lsk::RunSimulate(spec, sim, flags.output, Options(flags));
      for (const auto& a : run.report.accuracy) {
        std::cout << lsk::StrategyName(a.strategy) << '\t' << a.accuracy().Format(4) << '\n';
      }
      PrintSummary("simulate", run.stage);
      return kExitComplete;
    }

    // For infer, --languages picks which columns to fill; elsewhere it
    // replaces the configured language set.
    std::string languages = flags.languages;
    if (infer->parsed()) flags.languages.clear();
    const lsk::RunConfig config = LoadConfig(flags);
    lsk::StageOptions options = Options(flags);
    if (infer->parsed() && !languages.empty()) {
      options.languages = lsk::ParseLanguageList(languages);
    }
    if (translate->parsed()) {
      auto r = lsk::RunTranslate(config, options);
      PrintSummary("translate", r);
      return ExitCodeFor(r);
    }
    if (infer->parsed()) {
      auto r = lsk::RunInfer(config, options);
      PrintSummary("infer", r);
      return ExitCodeFor(r);
    }
    if (select->parsed()) {
      auto r = lsk::RunSelectLlm(config, options);
      PrintSummary("select-llm", r);
      return ExitCodeFor(r);
    }
    if (embed->parsed()) {
      auto r = lsk::RunEmbed(config, options);
      PrintSummary("embed", r);
      return ExitCodeFor(r);
    }
    if (evaluate->parsed()) {
      auto run = lsk::RunEvaluate(config, options);
      for (const auto& a : run.report.accuracy) {
        std::cout << lsk::StrategyName(a.strategy) << '\t' << a.accuracy().Format(4) << '\n';
      }
      PrintSummary("evaluate", run.stage);
      return ExitCodeFor(run.stage);
    }
    if (report->parsed()) {
      auto r = lsk::RunReport(config, options);
      PrintSummary("report", r);
      return ExitCodeFor(r);
    }
  } catch (const lsk::Error& e) {
    std::cerr << "error (" << lsk::ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitUnexpected;
}
