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

#include "lsk/gateway.h"

#include <algorithm>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <thread>

namespace lsk {
namespace {

using nlohmann::json;

std::string JoinUrl(const std::string& base, const std::string& path) {
  std::string url = base;
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url + path;
}

HttpHeaders BuildHeaders(const ModelEndpoint& endpoint) {
  HttpHeaders headers{{"Content-Type", "application/json"}};
  if (!endpoint.api_key_env.empty()) {
    const char* key = std::getenv(endpoint.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw EndpointError(ErrorKind::kAuth,
                          "environment variable " + endpoint.api_key_env +
                              " is not set",
                          0);
    }
    headers.emplace_back("Authorization", std::string("Bearer ") + key);
  }
  return headers;
}

class LimiterGuard {
 public:
  explicit LimiterGuard(InFlightLimiter& limiter) : limiter_(limiter) {
    limiter_.Acquire();
  }
  ~LimiterGuard() { limiter_.Release(); }
  LimiterGuard(const LimiterGuard&) = delete;
  LimiterGuard& operator=(const LimiterGuard&) = delete;

 private:
  InFlightLimiter& limiter_;
};

std::string Snippet(const std::string& body) {
  return body.size() <= 200 ? body : body.substr(0, 200) + "...";
}

}  // namespace

void ModelEndpoint::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidArgument, "endpoint: " + what);
  };
  if (base_url.empty()) fail("base_url is empty");
  if (model_name.empty()) fail("model_name is empty");
  if (max_retries < 0) fail("max_retries must be >= 0");
  if (timeout.count() <= 0) fail("timeout must be positive");
  if (max_in_flight < 1) fail("max_in_flight must be >= 1");
  if (initial_backoff.count() < 0) fail("initial_backoff must be >= 0");
}

bool IsRetryableStatus(int status) {
  return status == 408 || status == 409 || status == 429 || status >= 500;
}

void InFlightLimiter::Acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return available_ > 0; });
  --available_;
}

void InFlightLimiter::Release() {
  {
    std::lock_guard lock(mu_);
    ++available_;
  }
  cv_.notify_one();
}

HttpResponse PostWithRetries(HttpTransport& transport, const ModelEndpoint& endpoint,
                             const std::string& path, const std::string& body,
                             int* attempts_out) {
  const HttpHeaders headers = BuildHeaders(endpoint);
  const std::string url = JoinUrl(endpoint.base_url, path);
  std::string last_failure;
  int attempts = 0;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = endpoint.initial_backoff * (1LL << std::min(attempt - 1, 16));
      std::this_thread::sleep_for(std::min<std::chrono::milliseconds>(
          delay, std::chrono::milliseconds(30000)));
    }
    ++attempts;
    if (attempts_out) *attempts_out = attempts;
    HttpResponse response;
    try {
      response = transport.Post(url, headers, body, endpoint.timeout);
    } catch (const Error& e) {
      last_failure = e.what();
      continue;
    }
    if (response.status >= 200 && response.status < 300) return response;
    if (response.status == 401 || response.status == 403) {
      throw EndpointError(ErrorKind::kAuth,
                          "endpoint rejected credentials (HTTP " +
                              std::to_string(response.status) + ")",
                          attempts);
    }
    if (!IsRetryableStatus(response.status)) {
      throw EndpointError(ErrorKind::kBadRequest,
                          "HTTP " + std::to_string(response.status) + ": " +
                              Snippet(response.body),
                          attempts);
    }
    last_failure = "HTTP " + std::to_string(response.status);
  }
  throw EndpointError(ErrorKind::kTransport,
                      "giving up after " + std::to_string(attempts) +
                          " attempts: " + last_failure,
                      attempts);
}

ChatClient::ChatClient(ModelEndpoint endpoint, std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
  endpoint_.Validate();
  limiter_ = std::make_unique<InFlightLimiter>(endpoint_.max_in_flight);
}

ChatResult ChatClient::Complete(const PromptText& prompt) {
  json request = {
      {"model", endpoint_.model_name},
      {"messages", json::array({{{"role", "user"}, {"content", prompt.body}}})},
      {"temperature", endpoint_.temperature},
      {"max_tokens", endpoint_.max_output_tokens},
  };
  const std::string body = request.dump();
  LimiterGuard guard(*limiter_);
  int attempts = 0;
  struct Counter {
    std::atomic<std::size_t>& requests;
    std::atomic<std::size_t>& total;
    int& attempts;
    ~Counter() {
      ++requests;
      total += static_cast<std::size_t>(attempts);
    }
  } counter{requests_, attempts_, attempts};

  HttpResponse response =
      PostWithRetries(*transport_, endpoint_, "/chat/completions", body, &attempts);
  json parsed = json::parse(response.body, nullptr, false);
  if (parsed.is_discarded()) {
    throw EndpointError(ErrorKind::kTransport,
                        "chat response is not JSON: " + Snippet(response.body), attempts);
  }
  try {
    const json& message = parsed.at("choices").at(0).at("message");
    const json& content = message.at("content");
    ChatResult result;
    result.text = content.is_string() ? content.get<std::string>() : content.dump();
    result.attempt_count = attempts;
    return result;
  } catch (const json::exception&) {
    throw EndpointError(ErrorKind::kTransport,
                        "chat response lacks choices[0].message.content: " +
                            Snippet(response.body),
                        attempts);
  }
}

EmbeddingClient::EmbeddingClient(ModelEndpoint endpoint,
                                 std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
  endpoint_.Validate();
  limiter_ = std::make_unique<InFlightLimiter>(endpoint_.max_in_flight);
}

std::vector<std::vector<double>> EmbeddingClient::Embed(
    const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  json request = {{"model", endpoint_.model_name}, {"input", texts}};
  LimiterGuard guard(*limiter_);
  ++requests_;
  int attempts = 0;
  HttpResponse response =
      PostWithRetries(*transport_, endpoint_, "/embeddings", request.dump(), &attempts);
  json parsed = json::parse(response.body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("data") || !parsed["data"].is_array()) {
    throw EndpointError(ErrorKind::kTransport,
                        "embedding response lacks data[]: " + Snippet(response.body),
                        attempts);
  }
  const json& data = parsed["data"];
  if (data.size() != texts.size()) {
    throw EndpointError(ErrorKind::kTransport,
                        "embedding response has " + std::to_string(data.size()) +
                            " vectors for " + std::to_string(texts.size()) + " inputs",
                        attempts);
  }
  std::vector<std::vector<double>> out(texts.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const json& entry = data[i];
    std::size_t index = i;
    if (entry.contains("index") && entry["index"].is_number_unsigned()) {
      index = entry["index"].get<std::size_t>();
    }
    if (index >= out.size() || !entry.contains("embedding") ||
        !entry["embedding"].is_array()) {
      throw EndpointError(ErrorKind::kTransport, "malformed embedding entry", attempts);
    }
    for (const auto& v : entry["embedding"]) {
      if (!v.is_number()) {
        throw EndpointError(ErrorKind::kTransport, "non-numeric embedding value",
                            attempts);
      }
      out[index].push_back(v.get<double>());
    }
  }
  return out;
}

}  // namespace lsk
