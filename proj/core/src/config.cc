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

#include "lsk/config.h"

#include "lsk/error.h"
#include "lsk/io.h"

namespace lsk {
namespace {

using nlohmann::json;

[[noreturn]] void Bad(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::kInvalidArgument, "config: '" + key + "' " + msg);
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

ModelEndpoint ModelEndpointFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidArgument, "endpoint must be a JSON object");
  ModelEndpoint e;
  try {
    e.base_url = j.at("base_url").get<std::string>();
    e.model_name = j.at("model").get<std::string>();
    e.api_key_env = j.value("api_key_env", std::string());
    e.max_retries = j.value("max_retries", e.max_retries);
    e.timeout = std::chrono::milliseconds(
        static_cast<long long>(j.value("timeout_s", e.timeout.count() / 1000.0) * 1000.0));
    e.max_in_flight = j.value("max_in_flight", e.max_in_flight);
    e.initial_backoff = std::chrono::milliseconds(
        j.value("initial_backoff_ms", static_cast<long long>(e.initial_backoff.count())));
    e.temperature = j.value("temperature", e.temperature);
    e.max_output_tokens = j.value("max_output_tokens", e.max_output_tokens);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::kInvalidArgument, std::string("endpoint: ") + ex.what());
  }
  e.Validate();
  return e;
}

json ToJson(const ModelEndpoint& e) {
  return {{"base_url", e.base_url},
          {"model", e.model_name},
          {"api_key_env", e.api_key_env},
          {"max_retries", e.max_retries},
          {"timeout_s", static_cast<double>(e.timeout.count()) / 1000.0},
          {"max_in_flight", e.max_in_flight},
          {"initial_backoff_ms", e.initial_backoff.count()},
          {"temperature", e.temperature},
          {"max_output_tokens", e.max_output_tokens}};
}

void RunConfig::Validate() const {
  if (dataset_path.empty()) Bad("dataset.path", "is required");
  if (!std::filesystem::exists(dataset_path)) {
    Bad("dataset.path", "does not exist: " + dataset_path.string());
  }
  if (languages.empty()) Bad("languages", "must not be empty");
  for (std::size_t i = 1; i < languages.size(); ++i) {
    if (languages[i] == languages[i - 1]) Bad("languages", "has duplicates");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) Bad("split.train_fraction", "must lie in (0, 1)");
  if (k_values.empty()) Bad("k", "must not be empty");
  for (std::size_t k : k_values) {
    if (k == 0) Bad("k", "values must be positive");
  }
  if (seeds.empty()) Bad("seeds", "must not be empty");
  if (country_map && !std::filesystem::exists(*country_map)) {
    Bad("country_map", "does not exist: " + country_map->string());
  }
  if (templates_dir && !std::filesystem::is_directory(*templates_dir)) {
    Bad("templates_dir", "is not a directory: " + templates_dir->string());
  }
  if (output_dir.empty()) Bad("output_dir", "must not be empty");
}

const ModelEndpoint& RunConfig::ChatEndpoint() const {
  if (!chat) Bad("chat", "endpoint is required for this stage");
  return *chat;
}

const ModelEndpoint& RunConfig::TranslationEndpoint() const {
  if (translation) return *translation;
  if (!chat) Bad("translation", "endpoint (or chat) is required for this stage");
  return *chat;
}

const ModelEndpoint& RunConfig::EmbeddingEndpoint() const {
  if (!embedding) Bad("embedding", "endpoint is required for this stage");
  return *embedding;
}

std::string RunConfig::RunName() const {
  const std::string model = chat ? chat->model_name : std::string("none");
  return SafeFileComponent(std::string(DatasetName(dataset_id))) + "__" +
         SafeFileComponent(model);
}

std::string SafeFileComponent(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    out += keep ? c : '_';
  }
  return out.empty() ? "_" : out;
}

RunConfig RunConfigFromJson(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidArgument, "config must be a JSON object");
  RunConfig c;
  try {
    const json& ds = j.at("dataset");
    c.dataset_path = Resolve(base_dir, ds.at("path").get<std::string>());
    c.dataset_id = ParseDatasetId(ds.value("id", std::string("custom")));
    const std::string format = ds.value("format", std::string("mcq"));
    if (format == "mcq") {
      c.dataset_format = DatasetFormat::kMcq;
    } else if (format == "claims") {
      c.dataset_format = DatasetFormat::kClaims;
    } else {
      Bad("dataset.format", "must be \"mcq\" or \"claims\"");
    }

    if (j.contains("languages")) {
      const json& langs = j.at("languages");
      std::vector<Language> parsed;
      if (langs.is_string()) {
        parsed = ParseLanguageList(langs.get<std::string>());
      } else {
        for (const auto& code : langs) parsed.push_back(ParseLanguage(code.get<std::string>()));
      }
      c.languages = CanonicalSorted(parsed);
    } else {
      c.languages.assign(AllLanguages().begin(), AllLanguages().end());
    }

    if (j.contains("chat")) c.chat = ModelEndpointFromJson(j.at("chat"));
    if (j.contains("translation")) c.translation = ModelEndpointFromJson(j.at("translation"));
    if (j.contains("embedding")) c.embedding = ModelEndpointFromJson(j.at("embedding"));

    if (j.contains("split")) {
      const json& s = j.at("split");
      c.split_seed = s.value("seed", c.split_seed);
      if (s.contains("train")) c.train_count = s.at("train").get<std::size_t>();
      if (s.contains("test")) c.test_count = s.at("test").get<std::size_t>();
      c.train_fraction = s.value("train_fraction", c.train_fraction);
    }
    if (j.contains("k")) c.k_values = j.at("k").get<std::vector<std::size_t>>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("country_map") && !j.at("country_map").is_null()) {
      c.country_map = Resolve(base_dir, j.at("country_map").get<std::string>());
    }
    if (j.contains("templates_dir") && !j.at("templates_dir").is_null()) {
      c.templates_dir = Resolve(base_dir, j.at("templates_dir").get<std::string>());
    }
    c.output_dir = Resolve(base_dir, j.value("output_dir", std::string("lsk_out")));
    c.verify_language = j.value("verify_language", c.verify_language);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  const std::string text = InterpolateEnv(ReadFile(path));
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorKind::kInvalidArgument, "config " + path.string() + " is not valid JSON");
  }
  return RunConfigFromJson(j, path.parent_path().empty() ? std::filesystem::path(".")
                                                          : path.parent_path());
}

json ToJson(const RunConfig& c) {
  json j = {{"dataset",
             {{"path", c.dataset_path.filename().string()},
              {"id", std::string(DatasetName(c.dataset_id))},
              {"format", c.dataset_format == DatasetFormat::kMcq ? "mcq" : "claims"}}},
            {"languages", JoinCodes(c.languages)},
            {"split",
             {{"seed", c.split_seed},
              {"train", c.train_count ? json(*c.train_count) : json(nullptr)},
              {"test", c.test_count ? json(*c.test_count) : json(nullptr)},
              {"train_fraction", c.train_fraction}}},
            {"k", c.k_values},
            {"seeds", c.seeds},
            {"verify_language", c.verify_language}};
  j["chat_model"] = c.chat ? json(c.chat->model_name) : json(nullptr);
  j["translation_model"] =
      c.translation ? json(c.translation->model_name) : j["chat_model"];
  j["embedding_model"] = c.embedding ? json(c.embedding->model_name) : json(nullptr);
  return j;
}

}  // namespace lsk
