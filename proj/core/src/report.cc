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

#include "lsk/report.h"

#include "lsk/error.h"

namespace lsk {
namespace {

using nlohmann::json;

json FractionJson(const Fraction& f) {
  return {{"num", f.num}, {"den", f.den}, {"value", std::stod(f.Format(4))}};
}

Fraction FractionFromJson(const json& j) {
  return {j.at("num").get<std::uint64_t>(), j.at("den").get<std::uint64_t>()};
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string MdCell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

std::string Join(const std::vector<std::string>& cells, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += sep;
    out += cells[i];
  }
  return out;
}

// One table: header row plus data rows, as plain strings.
struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<Table> Tables(const EvaluationReport& r) {
  std::vector<Table> tables;

  Table summary{"summary", {"key", "value"}, {}};
  summary.rows.push_back({"dataset", r.dataset_id});
  summary.rows.push_back({"model", r.model_name});
  summary.rows.push_back({"languages", JoinCodes(r.languages)});
  summary.rows.push_back({"test_size", std::to_string(r.test_size)});
  summary.rows.push_back(
      {"global_language", r.global_language ? std::string(Code(*r.global_language)) : ""});
  summary.rows.push_back(
      {"verification_rate", r.verification_rate ? r.verification_rate->Format(4) : ""});
  tables.push_back(std::move(summary));

  Table acc{"accuracy", {"strategy", "correct", "total", "accuracy"}, {}};
  for (const auto& a : r.accuracy) {
    acc.rows.push_back({std::string(StrategyName(a.strategy)), std::to_string(a.correct),
                        std::to_string(a.total), a.accuracy().Format(4)});
  }
  tables.push_back(std::move(acc));

  Table dist{"language_distribution", {"strategy", "language", "count"}, {}};
  for (const auto& [s, counts] : r.language_distribution) {
    for (const auto& [lang, n] : counts.counts) {
      dist.rows.push_back({std::string(StrategyName(s)), std::string(Code(lang)),
                           std::to_string(n)});
    }
    if (counts.unselected > 0) {
      dist.rows.push_back({std::string(StrategyName(s)), "none",
                           std::to_string(counts.unselected)});
    }
  }
  tables.push_back(std::move(dist));

  Table heat{"cluster_heatmap", {"cluster", "expert", "members"}, {}};
  for (Language l : r.heatmap_languages) heat.header.emplace_back(Code(l));
  for (const auto& row : r.cluster_heatmap) {
    std::vector<std::string> cells = {std::to_string(row.cluster), std::string(Code(row.expert)),
                                      std::to_string(row.members)};
    for (const auto& f : row.accuracy) cells.push_back(f.Format(4));
    heat.rows.push_back(std::move(cells));
  }
  tables.push_back(std::move(heat));

  Table sweep{"cluster_size_sweep", {"k", "accuracy"}, {}};
  for (const auto& [k, f] : r.cluster_size_sweep) {
    sweep.rows.push_back({std::to_string(k), f.Format(4)});
  }
  tables.push_back(std::move(sweep));

  Table skipped{"skipped", {"strategy", "reason"}, {}};
  for (const auto& [s, why] : r.skipped) skipped.rows.push_back({std::string(StrategyName(s)), why});
  tables.push_back(std::move(skipped));
  return tables;
}

std::string EmitCsv(const EvaluationReport& r) {
  std::string out;
  bool first = true;
  for (const auto& t : Tables(r)) {
    if (!first) out += '\n';
    first = false;
    out += "# " + t.title + "\n";
    std::vector<std::string> header;
    for (const auto& h : t.header) header.push_back(CsvField(h));
    out += Join(header, ",") + "\n";
    for (const auto& row : t.rows) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(CsvField(c));
      out += Join(cells, ",") + "\n";
    }
  }
  return out;
}

std::string EmitMarkdown(const EvaluationReport& r) {
  std::string out = "# Evaluation: " + MdCell(r.dataset_id) + " / " + MdCell(r.model_name) + "\n";
  for (const auto& t : Tables(r)) {
    out += "\n## " + t.title + "\n\n";
    if (t.rows.empty()) {
      out += "_none_\n";
      continue;
    }
    std::vector<std::string> header;
    std::vector<std::string> rule;
    for (const auto& h : t.header) {
      header.push_back(MdCell(h));
      rule.emplace_back("---");
    }
    out += "| " + Join(header, " | ") + " |\n";
    out += "| " + Join(rule, " | ") + " |\n";
    for (const auto& row : t.rows) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(MdCell(c));
      out += "| " + Join(cells, " | ") + " |\n";
    }
  }
  if (!r.notes.empty()) {
    out += "\n## notes\n\n";
    for (const auto& n : r.notes) out += "- " + MdCell(n) + "\n";
  }
  return out;
}

}  // namespace

Fraction ComputeAccuracy(const SelectorOutcome& outcome) { return outcome.accuracy(); }

LanguageCounts LanguageDistribution(const SelectorOutcome& outcome) {
  std::array<std::size_t, kLanguageCount> counts{};
  LanguageCounts out;
  for (const auto& o : outcome.per_item) {
    if (o.chosen) {
      ++counts[static_cast<std::size_t>(CanonicalRank(*o.chosen))];
    } else {
      ++out.unselected;
    }
  }
  for (Language l : AllLanguages()) {
    const std::size_t n = counts[static_cast<std::size_t>(CanonicalRank(l))];
    if (n > 0) out.counts.emplace_back(l, n);
  }
  return out;
}

std::vector<HeatmapRow> ClusterHeatmap(const ClusterModel& model) {
  std::vector<HeatmapRow> rows;
  for (std::size_t c = 0; c < model.k; ++c) {
    HeatmapRow row;
    row.cluster = c;
    row.expert = model.expert_language[c];
    row.members = model.member_counts[c];
    for (std::size_t l = 0; l < model.languages.size(); ++l) {
      row.accuracy.push_back(model.TrainAccuracy(c, l));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

EvaluationReport BuildReport(const ReportInputs& in) {
  EvaluationReport r;
  r.dataset_id = in.dataset_id;
  r.model_name = in.model_name;
  r.languages = CanonicalSorted(in.languages);
  r.verification_rate = in.verification_rate;
  r.skipped = in.skipped;
  r.notes = in.notes;
  r.config_snapshot = in.config_snapshot;
  r.ground_truth = in.ground_truth;
  r.cluster_size_sweep = in.sweep;
  if (in.global != nullptr) r.global_language = in.global->language;
  if (in.cluster_model != nullptr) {
    r.heatmap_languages = in.cluster_model->languages;
    r.cluster_heatmap = ClusterHeatmap(*in.cluster_model);
  }

  bool have_size = false;
  for (Strategy s : AllStrategies()) {
    for (const auto& outcome : in.outcomes) {
      if (outcome.strategy != s) continue;
      if (outcome.per_item.empty()) ComputeAccuracy(outcome);  // throws
      if (have_size && outcome.per_item.size() != r.test_size) {
        throw Error(ErrorKind::kInvariant, "strategies were evaluated on different test sets");
      }
      have_size = true;
      r.test_size = outcome.per_item.size();
      r.accuracy.push_back({s, outcome.correct_count(), outcome.per_item.size()});
      if (s != Strategy::kMajority) {
        r.language_distribution.emplace_back(s, LanguageDistribution(outcome));
      }
    }
  }

  const StrategyAccuracy* oracle = nullptr;
  for (const auto& a : r.accuracy) {
    if (a.strategy == Strategy::kOracle) oracle = &a;
  }
  if (oracle != nullptr) {
    for (const auto& a : r.accuracy) {
      if (oracle->accuracy() < a.accuracy()) {
        throw Error(ErrorKind::kInvariant,
                    std::string(StrategyName(a.strategy)) + " accuracy " +
                        a.accuracy().Format(4) + " exceeds oracle " +
                        oracle->accuracy().Format(4));
      }
    }
  }
  return r;
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  throw Error(ErrorKind::kInvalidArgument, "unknown report format '" + std::string(name) + "'");
}

std::string_view ReportFormatExtension(ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kMarkdown:
      return "md";
  }
  return "txt";
}

std::string Emit(const EvaluationReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return ToJson(report).dump(2) + "\n";
    case ReportFormat::kCsv:
      return EmitCsv(report);
    case ReportFormat::kMarkdown:
      return EmitMarkdown(report);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown report format");
}

json ToJson(const EvaluationReport& r) {
  json acc = json::array();
  for (const auto& a : r.accuracy) {
    json f = FractionJson(a.accuracy());
    acc.push_back({{"strategy", std::string(StrategyName(a.strategy))},
                   {"correct", a.correct},
                   {"total", a.total},
                   {"accuracy", f["value"]}});
  }
  json dist = json::array();
  for (const auto& [s, counts] : r.language_distribution) {
    json c = json::array();
    for (const auto& [lang, n] : counts.counts) {
      c.push_back({{"language", std::string(Code(lang))}, {"count", n}});
    }
    dist.push_back({{"strategy", std::string(StrategyName(s))},
                    {"counts", std::move(c)},
                    {"unselected", counts.unselected}});
  }
  json heat = json::array();
  for (const auto& row : r.cluster_heatmap) {
    json cells = json::array();
    for (const auto& f : row.accuracy) cells.push_back(FractionJson(f));
    heat.push_back({{"cluster", row.cluster},
                    {"expert", std::string(Code(row.expert))},
                    {"members", row.members},
                    {"accuracy", std::move(cells)}});
  }
  json sweep = json::array();
  for (const auto& [k, f] : r.cluster_size_sweep) {
    sweep.push_back({{"k", k}, {"accuracy", FractionJson(f)}});
  }
  json skipped = json::array();
  for (const auto& [s, why] : r.skipped) {
    skipped.push_back({{"strategy", std::string(StrategyName(s))}, {"reason", why}});
  }
  json j = {{"dataset_id", r.dataset_id},
            {"model_name", r.model_name},
            {"languages", JoinCodes(r.languages)},
            {"test_size", r.test_size},
            {"accuracy_by_strategy", std::move(acc)},
            {"global_language", r.global_language ? json(std::string(Code(*r.global_language)))
                                                  : json(nullptr)},
            {"language_distribution", std::move(dist)},
            {"heatmap_languages", JoinCodes(r.heatmap_languages)},
            {"cluster_heatmap", std::move(heat)},
            {"cluster_size_sweep", std::move(sweep)},
            {"verification_rate",
             r.verification_rate ? FractionJson(*r.verification_rate) : json(nullptr)},
            {"skipped", std::move(skipped)},
            {"notes", r.notes},
            {"config_snapshot", r.config_snapshot},
            {"ground_truth", r.ground_truth}};
  return j;
}

EvaluationReport EvaluationReportFromJson(const json& j) {
  EvaluationReport r;
  try {
    r.dataset_id = j.at("dataset_id").get<std::string>();
    r.model_name = j.at("model_name").get<std::string>();
    const auto langs = j.at("languages").get<std::string>();
    if (!langs.empty()) r.languages = ParseLanguageList(langs);
    r.test_size = j.at("test_size").get<std::size_t>();
    for (const auto& a : j.at("accuracy_by_strategy")) {
      r.accuracy.push_back({ParseStrategy(a.at("strategy").get<std::string>()),
                            a.at("correct").get<std::size_t>(), a.at("total").get<std::size_t>()});
    }
    if (!j.at("global_language").is_null()) {
      r.global_language = ParseLanguage(j.at("global_language").get<std::string>());
    }
    for (const auto& d : j.at("language_distribution")) {
      LanguageCounts counts;
      for (const auto& c : d.at("counts")) {
        counts.counts.emplace_back(ParseLanguage(c.at("language").get<std::string>()),
                                   c.at("count").get<std::size_t>());
      }
      counts.unselected = d.at("unselected").get<std::size_t>();
      r.language_distribution.emplace_back(ParseStrategy(d.at("strategy").get<std::string>()),
                                           std::move(counts));
    }
    const auto heat_langs = j.at("heatmap_languages").get<std::string>();
    if (!heat_langs.empty()) r.heatmap_languages = ParseLanguageList(heat_langs);
    for (const auto& h : j.at("cluster_heatmap")) {
      HeatmapRow row;
      row.cluster = h.at("cluster").get<std::size_t>();
      row.expert = ParseLanguage(h.at("expert").get<std::string>());
      row.members = h.at("members").get<std::size_t>();
      for (const auto& f : h.at("accuracy")) row.accuracy.push_back(FractionFromJson(f));
      r.cluster_heatmap.push_back(std::move(row));
    }
    for (const auto& s : j.at("cluster_size_sweep")) {
      r.cluster_size_sweep.emplace_back(s.at("k").get<std::size_t>(),
                                        FractionFromJson(s.at("accuracy")));
    }
    if (!j.at("verification_rate").is_null()) {
      r.verification_rate = FractionFromJson(j.at("verification_rate"));
    }
    for (const auto& s : j.at("skipped")) {
      r.skipped.emplace_back(ParseStrategy(s.at("strategy").get<std::string>()),
                             s.at("reason").get<std::string>());
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.config_snapshot = j.at("config_snapshot");
    r.ground_truth = j.at("ground_truth");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("report: ") + e.what());
  }
  return r;
}

}  // namespace lsk
