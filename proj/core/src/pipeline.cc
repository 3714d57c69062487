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

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "lsk/error.h"
#include "lsk/extract.h"
#include "lsk/io.h"
#include "lsk/langid.h"
#include "lsk/lsk.h"
#include "lsk/matrix.h"
#include "lsk/prompts.h"
#include "lsk/selectors.h"
#include "lsk/store.h"
#include "lsk/translate.h"

namespace lsk {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kDryRunListLimit = 20;

void Log(const StageOptions& options, const std::string& line) {
  if (options.log != nullptr) *options.log << line << '\n';
}

std::shared_ptr<HttpTransport> TransportFor(const StageOptions& options) {
  return options.transport ? options.transport : MakeHttpTransport();
}

// Runs fn(0..n-1) on up to `threads` workers. The first exception stops the
// remaining work and is rethrown after all workers finish.
void ParallelFor(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
        stop.store(true);
        return;
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

TemplateSet TemplatesFor(const RunConfig& config) {
  TemplateSet templates = TemplateSet::BuiltIn();
  if (config.templates_dir) templates.LoadDirectory(*config.templates_dir);
  return templates;
}

std::string SourceHash(const McqItem& item) { return Sha256Hex(SerializeMcqRecord(item)); }

struct TranslatedLine {
  McqItem item;
  std::string source_hash;
  std::vector<std::string> untranslated;
};

std::string TranslatedLineText(const TranslatedLine& t) {
  json j = json::parse(SerializeMcqRecord(t.item));
  j["source_hash"] = t.source_hash;
  j["untranslated"] = t.untranslated;
  return j.dump();
}

// item_id -> latest line from the final file then the journal.
std::unordered_map<std::string, TranslatedLine> ReadTranslated(const fs::path& path,
                                                                DatasetId dataset) {
  std::unordered_map<std::string, TranslatedLine> out;
  if (!fs::exists(path)) return out;
  ForEachLine(path, [&](std::size_t number, std::string_view line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) return;  // torn journal tail
    TranslatedLine t;
    t.item = ParseMcqRecord(line, dataset, IdPolicy::kPreserve, number);
    t.source_hash = j.value("source_hash", std::string());
    if (j.contains("untranslated")) {
      t.untranslated = j.at("untranslated").get<std::vector<std::string>>();
    }
    out[t.item.item_id] = std::move(t);
  });
  return out;
}

void PrintPlan(const StageOptions& options, const std::vector<std::string>& plan) {
  for (std::size_t i = 0; i < plan.size() && i < kDryRunListLimit; ++i) {
    Log(options, "  would call: " + plan[i]);
  }
  if (plan.size() > kDryRunListLimit) {
    Log(options, "  ... and " + std::to_string(plan.size() - kDryRunListLimit) + " more");
  }
}

SelectionCache LoadSelectionCache(const fs::path& path) {
  json j = json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kParse, "malformed selection cache " + path.string());
  return SelectionCacheFromJson(j);
}

void WriteJson(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  WriteFileAtomic(path, j.dump(2) + "\n");
}

void WriteReports(const EvaluationReport& report, const RunPaths& paths, StageResult& stage) {
  for (ReportFormat f : {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kMarkdown}) {
    const fs::path out = paths.ReportFile(f);
    fs::create_directories(out.parent_path());
    WriteFileAtomic(out, Emit(report, f));
    stage.outputs.push_back(out);
  }
}

// Share of ok records whose reasoning text is detected as the prompted
// language.
std::optional<Fraction> VerificationRate(const std::vector<InferenceRecord>& records,
                                         const std::string& model,
                                         const std::unordered_set<std::string>& item_ids) {
  ScriptStopwordDetector detector;
  std::size_t checked = 0;
  std::size_t verified = 0;
  std::unordered_set<std::string> seen;
  for (const auto& rec : records) {
    if (rec.model_name != model || rec.status != RecordStatus::kOk) continue;
    if (!item_ids.count(rec.item_id)) continue;
    if (!seen.insert(rec.item_id + "\x1f" + std::string(Code(rec.language))).second) continue;
    const auto text = ReadJsonStringField(rec.raw_output, ReasoningKey(rec.language));
    if (!text || text->empty()) continue;
    ++checked;
    if (VerifyOutputLanguage(*text, rec.language, detector)) ++verified;
  }
  if (checked == 0) return std::nullopt;
  return Fraction::Of(verified, checked);
}

}  // namespace

RunPaths::RunPaths(const RunConfig& config)
    : root(config.output_dir),
      dataset(SafeFileComponent(std::string(DatasetName(config.dataset_id)))),
      run(config.RunName()) {}

fs::path RunPaths::Translation(Language lang) const {
  return root / "translations" / dataset / (std::string(Code(lang)) + ".jsonl");
}
fs::path RunPaths::TranslationJournal(Language lang) const {
  return root / "translations" / dataset / (std::string(Code(lang)) + ".partial.jsonl");
}
fs::path RunPaths::RunDir() const { return root / "runs" / run; }
fs::path RunPaths::SelectionFile() const { return root / "selection" / (run + ".json"); }
fs::path RunPaths::EmbeddingsFile() const { return root / "embeddings" / (dataset + ".json"); }
fs::path RunPaths::ClusterModelFile(std::size_t k) const {
  return root / "models" / (run + "__k" + std::to_string(k) + ".json");
}
fs::path RunPaths::GlobalChoiceFile() const { return root / "models" / (run + "__global.json"); }
fs::path RunPaths::ReportFile(ReportFormat format) const {
  return root / "reports" / (run + "." + std::string(ReportFormatExtension(format)));
}
fs::path RunPaths::LockFile() const { return root / ".lock"; }

RunLock::RunLock(const fs::path& path) {
  fs::create_directories(path.parent_path());
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorKind::kIo, "cannot open lock " + path.string() + ": " + std::strerror(errno));
  }
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorKind::kIo, "output directory is locked by another process: " +
                                    path.parent_path().string());
  }
}

RunLock::~RunLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

std::vector<McqItem> LoadSourceItems(const RunConfig& config) {
  if (config.dataset_format == DatasetFormat::kClaims) {
    return ReformatCultureAtlas(LoadClaims(config.dataset_path), config.split_seed).items;
  }
  return LoadDataset(config.dataset_path, config.dataset_id);
}

Split SplitForConfig(const RunConfig& config, const std::vector<McqItem>& items) {
  SplitSpec spec;
  spec.seed = config.split_seed;
  const std::size_t n = items.size();
  if (config.train_count || config.test_count) {
    spec.train_count = config.train_count.value_or(n - std::min(n, config.test_count.value_or(0)));
    spec.test_count = config.test_count.value_or(n - std::min(n, spec.train_count));
  } else {
    spec.train_count = static_cast<std::size_t>(
        std::llround(config.train_fraction * static_cast<double>(n)));
    spec.test_count = n - spec.train_count;
  }
  return SplitItems(items, spec);
}

std::vector<McqItem> LoadLanguageItems(const RunConfig& config,
                                       const std::vector<McqItem>& source, Language lang) {
  const bool all_native = std::all_of(source.begin(), source.end(), [&](const McqItem& item) {
    return item.source_language == lang;
  });
  if (all_native) return source;
  const fs::path path = RunPaths(config).Translation(lang);
  if (!fs::exists(path)) {
    throw Error(ErrorKind::kNotFound, "no translations for " + std::string(Code(lang)) + " at " +
                                          path.string() + "; run the translate stage first");
  }
  auto translated = ReadTranslated(path, config.dataset_id);
  std::vector<McqItem> out;
  for (const auto& item : source) {
    if (item.source_language == lang) {
      out.push_back(item);
      continue;
    }
    auto it = translated.find(item.item_id);
    if (it == translated.end() || it->second.source_hash != SourceHash(item)) {
      throw Error(ErrorKind::kNotFound, "item " + item.item_id + " has no current " +
                                            std::string(Code(lang)) +
                                            " translation; rerun the translate stage");
    }
    out.push_back(it->second.item);
  }
  return out;
}

StageResult RunTranslate(const RunConfig& config, const StageOptions& options) {
  config.Validate();
  const RunPaths paths(config);
  RunLock lock(paths.LockFile());
  const auto source = LoadSourceItems(config);
  StageResult result;

  std::unique_ptr<ChatClient> client;
  if (!options.dry_run) {
    client = std::make_unique<ChatClient>(config.TranslationEndpoint(), TransportFor(options));
  }

  for (Language lang : config.languages) {
    bool any_foreign = false;
    for (const auto& item : source) any_foreign |= item.source_language != lang;
    if (!any_foreign) continue;

    const fs::path final_path = paths.Translation(lang);
    const fs::path journal_path = paths.TranslationJournal(lang);
    fs::create_directories(final_path.parent_path());
    if (!options.resume && !options.dry_run) fs::remove(journal_path);

    std::unordered_map<std::string, TranslatedLine> done;
    if (options.resume) {
      done = ReadTranslated(final_path, config.dataset_id);
      for (auto& [id, t] : ReadTranslated(journal_path, config.dataset_id)) done[id] = std::move(t);
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < source.size(); ++i) {
      const McqItem& item = source[i];
      if (item.source_language == lang) continue;
      auto it = done.find(item.item_id);
      if (it != done.end() && it->second.source_hash == SourceHash(item) &&
          it->second.untranslated.empty()) {
        continue;
      }
      pending.push_back(i);
    }
    result.planned_calls += pending.size();
    if (options.dry_run) {
      std::vector<std::string> plan;
      for (std::size_t i : pending) plan.push_back("translate " + source[i].item_id + " -> " + std::string(Code(lang)));
      Log(options, std::string(Code(lang)) + ": " + std::to_string(pending.size()) + " items to translate");
      PrintPlan(options, plan);
      continue;
    }

    std::mutex mu;
    std::ofstream journal(journal_path, std::ios::app | std::ios::binary);
    if (!journal) throw Error(ErrorKind::kIo, "cannot open " + journal_path.string());
    std::size_t lang_failures = 0;
    const std::size_t calls_before = client->request_count();
    ParallelFor(pending.size(), config.TranslationEndpoint().max_in_flight, [&](std::size_t p) {
      const McqItem& item = source[pending[p]];
      TranslationOutcome outcome = TranslateItem(item, lang, *client);
      TranslatedLine line{std::move(outcome.item), SourceHash(item), outcome.failed_fields};
      std::lock_guard<std::mutex> guard(mu);
      journal << TranslatedLineText(line) << '\n';
      journal.flush();
      if (!line.untranslated.empty()) {
        ++lang_failures;
        std::string fields;
        for (const auto& f : line.untranslated) fields += (fields.empty() ? "" : ",") + f;
        result.failures.push_back(std::string(Code(lang)) + " " + item.item_id + ": " + fields);
      } else {
        ++result.succeeded;
      }
      done[item.item_id] = std::move(line);
    });
    journal.close();
    result.network_calls += client->request_count() - calls_before;
    result.transport_failures += lang_failures;

    // Final file in source order; journal removed once it is superseded.
    std::string text;
    for (const auto& item : source) {
      if (item.source_language == lang) continue;
      auto it = done.find(item.item_id);
      if (it == done.end()) continue;
      text += TranslatedLineText(it->second) + "\n";
    }
    WriteFileAtomic(final_path, text);
    fs::remove(journal_path);
    result.outputs.push_back(final_path);
    if (lang_failures > 0) result.complete = false;
    Log(options, std::string(Code(lang)) + ": translated " +
                     std::to_string(pending.size() - lang_failures) + "/" +
                     std::to_string(pending.size()) + " pending items");
  }
  return result;
}

StageResult RunInfer(const RunConfig& config, const StageOptions& options) {
  config.Validate();
  if (!options.resume) {
    throw Error(ErrorKind::kInvalidArgument,
                "infer always resumes from the run store; remove the run directory to start over");
  }
  const RunPaths paths(config);
  RunLock lock(paths.LockFile());
  const auto source = LoadSourceItems(config);
  const ModelEndpoint& endpoint = config.ChatEndpoint();
  std::vector<Language> langs = options.languages.empty() ? config.languages
                                                          : CanonicalSorted(options.languages);
  for (Language l : langs) {
    if (std::find(config.languages.begin(), config.languages.end(), l) == config.languages.end()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "language " + std::string(Code(l)) + " is not in the configured set");
    }
  }

  StageResult result;
  std::map<Language, std::vector<McqItem>> localized;
  for (Language l : langs) localized[l] = LoadLanguageItems(config, source, l);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < source.size(); ++i) index.emplace(source[i].item_id, i);

  RunStore store(paths.RunDir());
  const auto built = BuildMatrix(store.Snapshot(), source, endpoint.model_name, langs);
  const auto missing = MissingCells(built.matrix);
  result.planned_calls = missing.size();
  Log(options, std::to_string(missing.size()) + " cells to infer over " +
                   std::to_string(source.size()) + " items x " + std::to_string(langs.size()) +
                   " languages");
  if (options.dry_run) {
    std::vector<std::string> plan;
    for (const auto& [id, lang] : missing) plan.push_back("reason " + id + " in " + std::string(Code(lang)));
    PrintPlan(options, plan);
    return result;
  }

  const TemplateSet templates = TemplatesFor(config);
  store.WriteManifest({{"dataset", std::string(DatasetName(config.dataset_id))},
                       {"model", endpoint.model_name},
                       {"template_hash", templates.Hash()},
                       {"temperature", endpoint.temperature}});
  ChatClient client(endpoint, TransportFor(options));
  std::mutex mu;
  try {
    ParallelFor(missing.size(), endpoint.max_in_flight, [&](std::size_t m) {
      const auto& [id, lang] = missing[m];
      const McqItem& item = localized.at(lang)[index.at(id)];
      const PromptText prompt = BuildReasoningPrompt(item, lang, templates);
      InferenceRecord rec;
      rec.item_id = id;
      rec.language = lang;
      rec.model_name = endpoint.model_name;
      rec.prompt_hash = PromptHash(prompt.body, endpoint.model_name);
      try {
        ChatResult reply = client.Complete(prompt);
        rec.raw_output = std::move(reply.text);
        rec.attempt_count = reply.attempt_count;
        const Extraction ex = ExtractFinalAnswer(rec.raw_output, item);
        rec.extracted_label = ex.label;
        rec.status = ex.ok() ? RecordStatus::kOk : RecordStatus::kInvalidOutput;
      } catch (const EndpointError& e) {
        if (e.kind() != ErrorKind::kTransport) throw;
        rec.status = RecordStatus::kTransportError;
        rec.attempt_count = std::max(1, e.attempt_count());
        rec.raw_output = e.what();
      }
      rec.created_at = UtcTimestamp();
      store.Record(rec, prompt.body);
      std::lock_guard<std::mutex> guard(mu);
      if (rec.status == RecordStatus::kTransportError) {
        ++result.transport_failures;
        result.failures.push_back(id + " " + std::string(Code(lang)) + ": " + rec.raw_output);
      } else {
        ++result.succeeded;
      }
    });
  } catch (...) {
    store.Sync();
    result.network_calls = client.request_count();
    throw;
  }
  store.Sync();
  result.network_calls = client.request_count();
  result.complete = result.transport_failures == 0;
  result.outputs.push_back(store.records_path());
  Log(options, "infer: " + std::to_string(result.succeeded) + " recorded, " +
                   std::to_string(result.transport_failures) + " transport failures");
  return result;
}

StageResult RunSelectLlm(const RunConfig& config, const StageOptions& options) {
  config.Validate();
  const RunPaths paths(config);
  RunLock lock(paths.LockFile());
  const auto source = LoadSourceItems(config);
  const Split split = SplitForConfig(config, source);
  const ModelEndpoint& endpoint = config.ChatEndpoint();

  SelectionCache cache;
  if (options.resume && fs::exists(paths.SelectionFile())) cache = LoadSelectionCache(paths.SelectionFile());

  std::vector<const McqItem*> pending;
  for (const auto& item : split.test) {
    if (!cache.count(item.item_id)) pending.push_back(&item);
  }
  StageResult result;
  result.planned_calls = pending.size();
  Log(options, std::to_string(pending.size()) + " test items need a language selection");
  if (options.dry_run) {
    std::vector<std::string> plan;
    for (const auto* item : pending) plan.push_back("select language for " + item->item_id);
    PrintPlan(options, plan);
    return result;
  }

  ChatClient client(endpoint, TransportFor(options));
  std::mutex mu;
  std::size_t fallbacks = 0;
  auto save = [&] {
    std::lock_guard<std::mutex> guard(mu);
    WriteJson(paths.SelectionFile(), SelectionCacheToJson(cache));
  };
  try {
    ParallelFor(pending.size(), endpoint.max_in_flight, [&](std::size_t p) {
      const McqItem& item = *pending[p];
      try {
        const ChatResult reply = client.Complete(BuildSelectionPrompt(item, config.languages));
        bool fallback = false;
        const Language lang = ExtractExpertLanguage(reply.text, config.languages, &fallback);
        std::lock_guard<std::mutex> guard(mu);
        cache[item.item_id] = lang;
        fallbacks += fallback ? 1 : 0;
        ++result.succeeded;
      } catch (const EndpointError& e) {
        if (e.kind() != ErrorKind::kTransport) throw;
        std::lock_guard<std::mutex> guard(mu);
        ++result.transport_failures;
        result.failures.push_back(item.item_id + ": " + e.what());
      }
    });
  } catch (...) {
    save();
    throw;
  }
  save();
  result.network_calls = client.request_count();
  result.complete = result.transport_failures == 0;
  result.outputs.push_back(paths.SelectionFile());
  Log(options, "select-llm: " + std::to_string(result.succeeded) + " selected (" +
                   std::to_string(fallbacks) + " by fallback), " +
                   std::to_string(result.transport_failures) + " transport failures");
  return result;
}

StageResult RunEmbed(const RunConfig& config, const StageOptions& options) {
  config.Validate();
  const RunPaths paths(config);
  RunLock lock(paths.LockFile());
  const auto source = LoadSourceItems(config);
  const ModelEndpoint& endpoint = config.EmbeddingEndpoint();
  if (source.empty()) throw Error(ErrorKind::kInvalidArgument, "dataset has no items");

  EmbeddingCache cache(endpoint.model_name);
  if (options.resume && fs::exists(paths.EmbeddingsFile())) {
    cache = EmbeddingCache::Load(paths.EmbeddingsFile());
    if (cache.model_name() != endpoint.model_name) {
      Log(options, "embedding cache was built with " + cache.model_name() + "; starting over");
      cache = EmbeddingCache(endpoint.model_name);
    }
  }
  StageResult result;
  std::unordered_set<std::string> pending_hashes;
  for (const auto& item : source) {
    const std::string h = Sha256Hex(EmbeddingText(item));
    if (cache.Find(h) == nullptr) pending_hashes.insert(h);
  }
  result.planned_calls = pending_hashes.size();
  Log(options, std::to_string(pending_hashes.size()) + " items to embed");
  if (options.dry_run) return result;

  EmbeddingClient client(endpoint, TransportFor(options));
  fs::create_directories(paths.EmbeddingsFile().parent_path());
  try {
    EmbedItems(source, client, cache);
  } catch (...) {
    cache.Save(paths.EmbeddingsFile());
    throw;
  }
  cache.Save(paths.EmbeddingsFile());
  result.network_calls = client.request_count();
  result.succeeded = pending_hashes.size();
  result.outputs.push_back(paths.EmbeddingsFile());
  return result;
}

EvaluationRun RunEvaluate(const RunConfig& config, const StageOptions& options) {
  config.Validate();
  const RunPaths paths(config);
  RunLock lock(paths.LockFile());
  const auto source = LoadSourceItems(config);
  const Split split = SplitForConfig(config, source);
  const std::string model = config.ChatEndpoint().model_name;

  EvaluationRun run;
  ReportInputs in;
  in.dataset_id = std::string(DatasetName(config.dataset_id));
  in.model_name = model;
  in.languages = config.languages;
  in.config_snapshot = ToJson(config);
  in.config_snapshot["template_hash"] = TemplatesFor(config).Hash();

  if (!fs::exists(paths.RunDir() / "records.jsonl")) {
    throw Error(ErrorKind::kNotFound, "no inference records at " + paths.RunDir().string() +
                                          "; run the infer stage first");
  }
  RunStore store(paths.RunDir());
  const auto records = store.Snapshot();
  MatrixBuild built = BuildMatrix(records, source, model, config.languages);
  const ResponseMatrix& matrix = built.matrix;
  const CellCounts counts = CountCells(matrix);
  if (counts.missing > 0) {
    in.notes.push_back(std::to_string(counts.missing) +
                       " cells are missing and score as incorrect");
    run.stage.complete = false;
  }
  if (counts.invalid > 0) {
    in.notes.push_back(std::to_string(counts.invalid) + " cells hold unparseable answers");
  }
  if (!built.warnings.empty()) {
    in.notes.push_back(std::to_string(built.warnings.size()) +
                       " stored items are not in the dataset and were ignored");
  }

  std::vector<std::string> train_ids, test_ids;
  for (const auto& item : split.train) train_ids.push_back(item.item_id);
  for (const auto& item : split.test) test_ids.push_back(item.item_id);
  const ResponseMatrix train = matrix.Rows(train_ids);

  SelectorState state;
  GlobalChoice global = TrainGlobalLanguage(train);
  state.global = &global;
  in.global = &global;
  WriteJson(paths.GlobalChoiceFile(), ToJson(global));

  std::vector<std::pair<Strategy, std::string>> skipped;
  std::optional<ClusterModel> primary;
  EmbeddingTable embeddings;
  bool have_embeddings = fs::exists(paths.EmbeddingsFile());
  if (have_embeddings) {
    embeddings = EmbeddingCache::Load(paths.EmbeddingsFile()).Table();
    for (const auto& item : source) {
      if (!embeddings.count(item.item_id)) {
        have_embeddings = false;
        break;
      }
    }
  }
  if (!have_embeddings) {
    skipped.emplace_back(Strategy::kLskExtractor,
                         "embeddings missing for some items; run the embed stage");
  } else {
    std::vector<Vector> vectors;
    for (const auto& id : train_ids) vectors.push_back(embeddings.at(id));
    for (std::size_t k : config.k_values) {
      if (k > vectors.size()) {
        in.notes.push_back("k=" + std::to_string(k) + " exceeds the training size; skipped");
        continue;
      }
      ClusterModel m = TrainLskWithClustering(train, KMeansBestOf(vectors, k, config.seeds),
                                              config.seeds.front());
      WriteJson(paths.ClusterModelFile(k), ToJson(m));
      SelectorState s;
      s.cluster_model = &m;
      s.embeddings = &embeddings;
      in.sweep.emplace_back(k, Evaluate(Strategy::kLskExtractor, test_ids, matrix, s).accuracy());
      if (!primary) primary = std::move(m);
    }
    if (!primary) skipped.emplace_back(Strategy::kLskExtractor, "no usable k value");
  }
  if (primary) {
    state.cluster_model = &*primary;
    state.embeddings = &embeddings;
    in.cluster_model = &*primary;
  }

  SelectionCache llm_cache;
  bool have_llm = fs::exists(paths.SelectionFile());
  if (have_llm) {
    llm_cache = LoadSelectionCache(paths.SelectionFile());
    for (const auto& id : test_ids) {
      if (!llm_cache.count(id)) {
        have_llm = false;
        break;
      }
    }
  }
  if (have_llm) {
    state.llm_cache = &llm_cache;
  } else {
    skipped.emplace_back(Strategy::kLlmSelected,
                         "language selections missing for some test items; run select-llm");
  }

  std::unordered_map<std::string, std::string> item_country;
  for (const auto& item : source) {
    if (item.country) item_country.emplace(item.item_id, *item.country);
  }
  CountryMap country_map = config.country_map ? CountryMap::Load(*config.country_map)
                                              : CountryMap::BuiltIn(config.dataset_id);
  if (item_country.empty()) {
    skipped.emplace_back(Strategy::kCountry, "dataset has no country metadata");
  } else {
    state.country_map = &country_map;
    state.item_country = &item_country;
  }
  if (!matrix.HasLanguage(Language::kEn)) {
    skipped.emplace_back(Strategy::kOnlyEnglish, "en is not in the language set");
  }

  for (Strategy s : AllStrategies()) {
    bool skip = false;
    for (const auto& sk : skipped) skip |= sk.first == s;
    if (!skip) in.outcomes.push_back(Evaluate(s, test_ids, matrix, state));
  }
  in.skipped = skipped;

  if (config.verify_language) {
    std::unordered_set<std::string> ids(test_ids.begin(), test_ids.end());
    ids.insert(train_ids.begin(), train_ids.end());
    in.verification_rate = VerificationRate(records, model, ids);
  }

  run.report = BuildReport(in);
  WriteReports(run.report, paths, run.stage);
  for (const auto& a : run.report.accuracy) {
    Log(options, std::string(StrategyName(a.strategy)) + ": " + a.accuracy().Format(4));
  }
  return run;
}

StageResult RunReport(const RunConfig& config, const StageOptions& options) {
  const RunPaths paths(config);
  const fs::path json_path = paths.ReportFile(ReportFormat::kJson);
  if (!fs::exists(json_path)) {
    throw Error(ErrorKind::kNotFound,
                "no report at " + json_path.string() + "; run the evaluate stage first");
  }
  json j = json::parse(ReadFile(json_path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kParse, "malformed report " + json_path.string());
  const EvaluationReport report = EvaluationReportFromJson(j);
  StageResult result;
  for (ReportFormat f : {ReportFormat::kCsv, ReportFormat::kMarkdown}) {
    WriteFileAtomic(paths.ReportFile(f), Emit(report, f));
    result.outputs.push_back(paths.ReportFile(f));
  }
  Log(options, "report: rewrote csv and markdown from " + json_path.string());
  return result;
}

EvaluationRun RunSimulate(const SyntheticSpec& spec, const SimulationOptions& sim,
                          const fs::path& output_dir, const StageOptions& options) {
  const RunPaths paths(output_dir, "synthetic", "synthetic__synthetic");
  RunLock lock(paths.LockFile());
  SimulationResult r = RunSimulation(spec, sim);
  const SyntheticData& d = r.data;

  EvaluationRun run;
  WriteFileAtomic(output_dir / "synthetic_dataset.jsonl", SerializeDataset(d.items));
  run.stage.outputs.push_back(output_dir / "synthetic_dataset.jsonl");

  EmbeddingCache cache("synthetic");
  for (const auto& item : d.items) {
    cache.Put({item.item_id, Sha256Hex(EmbeddingText(item)), d.embeddings.at(item.item_id)});
  }
  fs::create_directories(paths.EmbeddingsFile().parent_path());
  cache.Save(paths.EmbeddingsFile());
  run.stage.outputs.push_back(paths.EmbeddingsFile());

  {
    RunStore store(paths.RunDir());
    for (const auto& rec : SyntheticRecords(d)) store.Record(rec);
    store.Sync();
    const auto rebuilt =
        BuildMatrix(store.Snapshot(), d.items, d.matrix.model_name(), d.spec.languages);
    if (!(rebuilt.matrix == d.matrix)) {
      throw Error(ErrorKind::kInvariant, "store replay does not reproduce the synthetic matrix");
    }
    run.stage.outputs.push_back(store.records_path());
  }
  WriteJson(paths.ClusterModelFile(r.model.k), ToJson(r.model));
  WriteJson(paths.GlobalChoiceFile(), ToJson(r.global));

  ReportInputs in;
  in.dataset_id = "synthetic";
  in.model_name = "synthetic";
  in.languages = d.spec.languages;
  in.outcomes = r.outcomes;
  in.global = &r.global;
  in.cluster_model = &r.model;
  in.sweep = r.sweep;
  in.notes.push_back("llm_selected uses a uniformly random stand-in choice per item");
  in.notes.push_back("country uses one synthetic region per planted cluster");
  json ks = json::array();
  for (std::size_t k : sim.k_values) ks.push_back(k);
  in.config_snapshot = {{"spec", ToJson(d.spec)},
                        {"k", ks},
                        {"kmeans_seeds", sim.kmeans_seeds},
                        {"split_seed", sim.split_seed},
                        {"train_fraction", sim.train_fraction}};
  in.ground_truth = r.ground_truth;
  run.report = BuildReport(in);
  WriteReports(run.report, paths, run.stage);
  Log(options, "simulate: expert recovery " + r.expert_recovery.Format(4));
  return run;
}

}  // namespace lsk
