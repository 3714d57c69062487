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
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "lsk/error.h"
#include "lsk/prompts.h"

namespace lsk {

// An OpenAI-compatible endpoint. Chat requests go to
// `{base_url}/chat/completions`, embeddings to `{base_url}/embeddings`.
struct ModelEndpoint {
  std::string base_url;
  std::string model_name;
  // Name of the environment variable holding the API key. Empty means the
  // endpoint needs no Authorization header.
  std::string api_key_env;
  int max_retries = 3;
  std::chrono::milliseconds timeout{60000};
  int max_in_flight = 4;
  std::chrono::milliseconds initial_backoff{500};
  double temperature = 0.0;
  int max_output_tokens = 1024;

  // Throws Error(kInvalidArgument) on max_retries < 0, timeout <= 0,
  // max_in_flight < 1 or an empty base_url/model_name.
  void Validate() const;
};

// Failure talking to an endpoint. kind() is kAuth, kBadRequest or kTransport.
class EndpointError : public Error {
 public:
  EndpointError(ErrorKind kind, const std::string& message, int attempts)
      : Error(kind, message), attempt_count_(attempts) {}
  int attempt_count() const { return attempt_count_; }

 private:
  int attempt_count_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// Blocking HTTP POST. Connection-level failures throw Error(kTransport);
// any HTTP status is returned, not thrown.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url, const HttpHeaders& headers,
                            const std::string& body,
                            std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> MakeHttpTransport();

bool IsRetryableStatus(int status);

// Bounds concurrent requests against one endpoint.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int limit) : available_(limit) {}
  void Acquire();
  void Release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int available_;
};

struct ChatResult {
  std::string text;
  int attempt_count = 0;
};

// Thread-safe chat-completion client with bounded retries and exponential
// backoff. Auth and bad-request responses are never retried.
class ChatClient {
 public:
  explicit ChatClient(ModelEndpoint endpoint,
                      std::shared_ptr<HttpTransport> transport = MakeHttpTransport());

  ChatResult Complete(const PromptText& prompt);

  const ModelEndpoint& endpoint() const { return endpoint_; }
  // Completed Complete() calls, successful or not.
  std::size_t request_count() const { return requests_.load(); }
  // Raw HTTP attempts including retries.
  std::size_t attempt_count() const { return attempts_.load(); }

 private:
  ModelEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
  std::unique_ptr<InFlightLimiter> limiter_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> attempts_{0};
};

class EmbeddingClient {
 public:
  explicit EmbeddingClient(ModelEndpoint endpoint,
                           std::shared_ptr<HttpTransport> transport = MakeHttpTransport());

  // One raw (unnormalized) vector per input, in input order.
  std::vector<std::vector<double>> Embed(const std::vector<std::string>& texts);

  const ModelEndpoint& endpoint() const { return endpoint_; }
  std::size_t request_count() const { return requests_.load(); }

 private:
  ModelEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
  std::unique_ptr<InFlightLimiter> limiter_;
  std::atomic<std::size_t> requests_{0};
};

// Posts `body` with retry/backoff semantics shared by both clients.
HttpResponse PostWithRetries(HttpTransport& transport, const ModelEndpoint& endpoint,
                             const std::string& path, const std::string& body,
                             int* attempts_out);

}  // namespace lsk
