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

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lsk/gateway.h"

namespace httplib {
class Server;
}

namespace lsk::testing {

// (status, body) for one request, given the URL path and request body.
using StubHandler = std::function<std::pair<int, std::string>(const std::string& path,
                                                              const std::string& body)>;

// OpenAI-compatible response bodies.
std::string ChatReply(const std::string& content);
std::string EmbeddingReply(const std::vector<std::vector<double>>& vectors);

// The user message of a chat request body ("" when absent).
std::string PromptOf(const std::string& request_body);

// Deterministic fake model covering every prompt the pipeline sends:
// translations echo the text tagged with the target code, selection prompts
// name `expert`, reasoning prompts answer the choice picked by a hash of the
// prompt, and embedding requests return hashed non-zero vectors of `dim`.
StubHandler ScriptedModel(const std::string& expert = "Turkish", std::size_t dim = 8);

// Loopback HTTP server on an ephemeral port, serving POST requests through
// `handler` on a background thread.
class StubServer {
 public:
  explicit StubServer(StubHandler handler);
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  std::string base_url() const;
  std::size_t request_count() const { return requests_.load(); }
  void Stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
};

// In-process transport with the same handler contract; records every URL.
class FakeTransport : public HttpTransport {
 public:
  explicit FakeTransport(StubHandler handler) : handler_(std::move(handler)) {}
  HttpResponse Post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                    std::chrono::milliseconds timeout) override;

  std::size_t request_count() const;
  std::vector<std::string> bodies() const;
  HttpHeaders last_headers() const;

 private:
  StubHandler handler_;
  mutable std::mutex mu_;
  std::vector<std::string> bodies_;
  HttpHeaders last_headers_;
};

// Endpoint for `base_url` with two retries and a 1 ms initial backoff.
ModelEndpoint TestEndpoint(const std::string& base_url, const std::string& model = "stub-model");

}  // namespace lsk::testing
