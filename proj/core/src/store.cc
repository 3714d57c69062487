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

#include "lsk/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>

#include "lsk/error.h"
#include "lsk/io.h"

namespace lsk {

using nlohmann::json;

std::string_view RecordStatusName(RecordStatus status) {
  switch (status) {
    case RecordStatus::kOk: return "ok";
    case RecordStatus::kInvalidOutput: return "invalid_output";
    case RecordStatus::kTransportError: return "transport_error";
  }
  return "ok";
}

RecordStatus ParseRecordStatus(std::string_view name) {
  if (name == "ok") return RecordStatus::kOk;
  if (name == "invalid_output") return RecordStatus::kInvalidOutput;
  if (name == "transport_error") return RecordStatus::kTransportError;
  throw Error(ErrorKind::kParse, "unknown record status '" + std::string(name) + "'");
}

std::string PromptHash(std::string_view body, std::string_view model_name) {
  std::string material(model_name);
  material += '\0';
  material += body;
  return Sha256Hex(material);
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json ToJson(const InferenceRecord& rec) {
  json j = json::object();
  j["item_id"] = rec.item_id;
  j["language"] = std::string(Code(rec.language));
  j["model"] = rec.model_name;
  j["prompt_hash"] = rec.prompt_hash;
  j["raw_output"] = rec.raw_output;
  j["extracted_label"] =
      rec.extracted_label ? json(std::string(1, *rec.extracted_label)) : json(nullptr);
  j["status"] = std::string(RecordStatusName(rec.status));
  j["attempts"] = rec.attempt_count;
  j["created_at"] = rec.created_at;
  return j;
}

InferenceRecord InferenceRecordFromJson(const json& j) {
  InferenceRecord rec;
  try {
    rec.item_id = j.at("item_id").get<std::string>();
    rec.language = ParseLanguage(j.at("language").get<std::string>());
    rec.model_name = j.at("model").get<std::string>();
    rec.prompt_hash = j.at("prompt_hash").get<std::string>();
    rec.raw_output = j.at("raw_output").get<std::string>();
    const json& label = j.at("extracted_label");
    if (!label.is_null()) {
      const auto s = label.get<std::string>();
      if (s.size() != 1) throw Error(ErrorKind::kParse, "extracted_label must be one letter");
      rec.extracted_label = s[0];
    }
    rec.status = ParseRecordStatus(j.at("status").get<std::string>());
    rec.attempt_count = j.value("attempts", 1);
    rec.created_at = j.value("created_at", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("inference record: ") + e.what());
  }
  return rec;
}

void Validate(const InferenceRecord& rec) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidArgument, "inference record: " + what);
  };
  if (rec.item_id.empty()) fail("item_id is empty");
  if (rec.model_name.empty()) fail("model_name is empty");
  if (rec.prompt_hash.empty()) fail("prompt_hash is empty");
  if (rec.status == RecordStatus::kOk && !rec.extracted_label) {
    fail("status ok requires an extracted label");
  }
  if (rec.attempt_count < 0) fail("attempt_count is negative");
}

RunStore::RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  const auto path = records_path();
  if (std::filesystem::exists(path)) {
    ForEachLine(path, [&](std::size_t, std::string_view line) {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        ++corrupt_lines_;
        return;
      }
      InferenceRecord rec;
      try {
        rec = InferenceRecordFromJson(j);
        Validate(rec);
      } catch (const Error&) {
        ++corrupt_lines_;
        return;
      }
      const std::string key = Key(rec);
      if (rec.status != RecordStatus::kTransportError) {
        auto [it, inserted] = index_.try_emplace(key, records_.size());
        if (!inserted && records_[it->second].raw_output != rec.raw_output) ++conflicts_;
        if (!inserted) return;
      }
      records_.push_back(std::move(rec));
    });
  }
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  // A crash can leave a final line without its newline; terminate it so the
  // next append starts on a fresh line.
  const auto size = std::filesystem::file_size(path);
  if (size > 0) {
    char last = '\n';
    std::ifstream in(path, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(size - 1));
    in.get(last);
    if (last != '\n' && ::write(fd_, "\n", 1) != 1) {
      throw Error(ErrorKind::kIo, "cannot repair " + path.string());
    }
  }
}

RunStore::~RunStore() {
  if (fd_ >= 0) {
    ::fsync(fd_);
    ::close(fd_);
  }
}

std::string RunStore::Key(const InferenceRecord& rec) {
  std::string key = rec.item_id;
  key += '\x1f';
  key += Code(rec.language);
  key += '\x1f';
  key += rec.model_name;
  key += '\x1f';
  key += rec.prompt_hash;
  return key;
}

RecordOutcome RunStore::Record(const InferenceRecord& rec,
                               std::optional<std::string_view> prompt_body) {
  Validate(rec);
  std::lock_guard lock(mu_);
  if (prompt_body) {
    const std::uint64_t fingerprint = Fnv1a64(*prompt_body);
    auto [it, inserted] = body_fingerprints_.try_emplace(rec.prompt_hash, fingerprint);
    if (!inserted && it->second != fingerprint) {
      throw Error(ErrorKind::kInvariant,
                  "prompt_hash collision between distinct prompt bodies: " + rec.prompt_hash);
    }
  }
  const std::string key = Key(rec);
  if (rec.status != RecordStatus::kTransportError) {
    if (auto it = index_.find(key); it != index_.end()) {
      if (records_[it->second].raw_output == rec.raw_output) return RecordOutcome::kDuplicate;
      ++conflicts_;
      return RecordOutcome::kConflict;
    }
  }
  const std::string line = ToJson(rec).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kIo, "append to " + records_path().string() +
                                      " failed: " + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  if (rec.status != RecordStatus::kTransportError) index_.emplace(key, records_.size());
  records_.push_back(rec);
  return RecordOutcome::kAppended;
}

void RunStore::Sync() {
  std::lock_guard lock(mu_);
  if (::fsync(fd_) != 0) {
    throw Error(ErrorKind::kIo, "fsync failed for " + records_path().string());
  }
}

std::vector<InferenceRecord> RunStore::Snapshot() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t RunStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::size_t RunStore::conflict_count() const {
  std::lock_guard lock(mu_);
  return conflicts_;
}

void RunStore::WriteManifest(const json& manifest) const {
  WriteFileAtomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
}

std::optional<json> RunStore::ReadManifest() const {
  const auto path = dir_ / "manifest.json";
  if (!std::filesystem::exists(path)) return std::nullopt;
  json j = json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kParse, "malformed " + path.string());
  return j;
}

}  // namespace lsk
