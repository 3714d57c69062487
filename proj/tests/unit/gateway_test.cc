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

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "lsk/prompts.h"
#include "support/stub_server.h"

namespace lsk {
namespace {

using nlohmann::json;
using testing::ChatReply;
using testing::EmbeddingReply;
using testing::FakeTransport;
using testing::StubServer;
using testing::TestEndpoint;

PromptText Prompt(const std::string& body) { return PromptText{body, {}, Language::kEn}; }

TEST(GatewayTest, SendsChatCompletionWireFormat) {
  auto transport = std::make_shared<FakeTransport>([](const std::string& path, const std::string&) {
    EXPECT_EQ(path, "/v1/chat/completions");
    return std::pair<int, std::string>(200, ChatReply("hello"));
  });
  ModelEndpoint e = TestEndpoint("http://stub.invalid/v1/");
  e.temperature = 0.0;
  e.max_output_tokens = 77;
  ChatClient client(e, transport);
  ChatResult r = client.Complete(Prompt("ping"));
  EXPECT_EQ(r.text, "hello");
  EXPECT_EQ(r.attempt_count, 1);
  const json sent = json::parse(transport->bodies().at(0));
  EXPECT_EQ(sent["model"], "stub-model");
  EXPECT_EQ(sent["messages"][0]["role"], "user");
  EXPECT_EQ(sent["messages"][0]["content"], "ping");
  EXPECT_EQ(sent["temperature"], 0.0);
  EXPECT_EQ(sent["max_tokens"], 77);
}

TEST(GatewayTest, RetriesRetryableStatusThenSucceeds) {
  std::atomic<int> calls{0};
  auto transport = std::make_shared<FakeTransport>([&](const std::string&, const std::string&) {
    const int n = ++calls;
    if (n == 1) return std::pair<int, std::string>(429, "slow down");
    if (n == 2) return std::pair<int, std::string>(503, "busy");
    return std::pair<int, std::string>(200, ChatReply("ok"));
  });
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  ChatResult r = client.Complete(Prompt("x"));
  EXPECT_EQ(r.text, "ok");
  EXPECT_EQ(r.attempt_count, 3);
  EXPECT_EQ(client.attempt_count(), 3u);
  EXPECT_EQ(client.request_count(), 1u);
}

TEST(GatewayTest, ExhaustedRetriesAreTransportErrors) {
  auto transport = std::make_shared<FakeTransport>(
      [](const std::string&, const std::string&) { return std::pair<int, std::string>(500, ""); });
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  try {
    client.Complete(Prompt("x"));
    FAIL();
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTransport);
    EXPECT_EQ(e.attempt_count(), 3);  // 1 + max_retries
  }
  EXPECT_EQ(transport->request_count(), 3u);
}

TEST(GatewayTest, AuthAndBadRequestAreNotRetried) {
  for (int status : {401, 403, 400, 404}) {
    auto transport = std::make_shared<FakeTransport>([status](const std::string&, const std::string&) {
      return std::pair<int, std::string>(status, "{\"error\":\"no\"}");
    });
    ChatClient client(TestEndpoint("http://stub.invalid"), transport);
    try {
      client.Complete(Prompt("x"));
      FAIL();
    } catch (const EndpointError& e) {
      EXPECT_EQ(e.kind(), status < 404 && status != 400 ? ErrorKind::kAuth : ErrorKind::kBadRequest);
      EXPECT_EQ(e.attempt_count(), 1);
    }
    EXPECT_EQ(transport->request_count(), 1u) << status;
  }
}

TEST(GatewayTest, MalformedBodyIsTransportError) {
  auto transport = std::make_shared<FakeTransport>([](const std::string&, const std::string&) {
    return std::pair<int, std::string>(200, "{\"unexpected\":true}");
  });
  ChatClient client(TestEndpoint("http://stub.invalid"), transport);
  try {
    client.Complete(Prompt("x"));
    FAIL();
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTransport);
  }
}

TEST(GatewayTest, ApiKeyFromNamedEnvironmentVariable) {
  auto transport = std::make_shared<FakeTransport>([](const std::string&, const std::string&) {
    return std::pair<int, std::string>(200, ChatReply("ok"));
  });
  ModelEndpoint e = TestEndpoint("http://stub.invalid");
  e.api_key_env = "LSK_GATEWAY_TEST_KEY";
  setenv("LSK_GATEWAY_TEST_KEY", "sekrit", 1);
  ChatClient client(e, transport);
  client.Complete(Prompt("x"));
  bool found = false;
  for (const auto& [name, value] : transport->last_headers()) {
    if (name == "Authorization") {
      EXPECT_EQ(value, "Bearer sekrit");
      found = true;
    }
  }
  EXPECT_TRUE(found);
  unsetenv("LSK_GATEWAY_TEST_KEY");
  try {
    client.Complete(Prompt("x"));
    FAIL();
  } catch (const EndpointError& err) {
    EXPECT_EQ(err.kind(), ErrorKind::kAuth);
  }
}

TEST(GatewayTest, EndpointValidation) {
  ModelEndpoint e = TestEndpoint("http://x");
  e.max_in_flight = 0;
  EXPECT_THROW(e.Validate(), Error);
  e = TestEndpoint("");
  EXPECT_THROW(e.Validate(), Error);
  e = TestEndpoint("http://x");
  e.max_retries = -1;
  EXPECT_THROW(e.Validate(), Error);
  EXPECT_TRUE(IsRetryableStatus(429));
  EXPECT_TRUE(IsRetryableStatus(502));
  EXPECT_FALSE(IsRetryableStatus(400));
}

TEST(GatewayTest, InFlightLimitIsRespected) {
  std::atomic<int> current{0};
  std::atomic<int> peak{0};
  auto transport = std::make_shared<FakeTransport>([&](const std::string&, const std::string&) {
    const int now = ++current;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --current;
    return std::pair<int, std::string>(200, ChatReply("ok"));
  });
  ModelEndpoint e = TestEndpoint("http://stub.invalid");
  e.max_in_flight = 2;
  ChatClient client(e, transport);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) threads.emplace_back([&] { client.Complete(Prompt("x")); });
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(client.request_count(), 8u);
}

TEST(GatewayTest, EmbeddingsHonorIndexOrder) {
  auto transport = std::make_shared<FakeTransport>([](const std::string& path, const std::string&) {
    EXPECT_EQ(path, "/embeddings");
    json reply = {{"data", json::array({{{"index", 1}, {"embedding", {3.0, 4.0}}},
                                        {{"index", 0}, {"embedding", {1.0, 0.0}}}})}};
    return std::pair<int, std::string>(200, reply.dump());
  });
  EmbeddingClient client(TestEndpoint("http://stub.invalid"), transport);
  auto out = client.Embed({"a", "b"});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(out[1], (std::vector<double>{3.0, 4.0}));
  EXPECT_TRUE(client.Embed({}).empty());
}

TEST(GatewayTest, EmbeddingCountMismatchIsTransportError) {
  auto transport = std::make_shared<FakeTransport>([](const std::string&, const std::string&) {
    return std::pair<int, std::string>(200, EmbeddingReply({{1.0}}));
  });
  EmbeddingClient client(TestEndpoint("http://stub.invalid"), transport);
  EXPECT_THROW(client.Embed({"a", "b"}), EndpointError);
}

TEST(GatewayTest, RealHttpAgainstLoopbackStub) {
  StubServer server([](const std::string& path, const std::string& body) {
    EXPECT_EQ(path, "/v1/chat/completions");
    EXPECT_EQ(testing::PromptOf(body), "over the wire");
    return std::pair<int, std::string>(200, ChatReply("{\"final_answer\":\"A\"}"));
  });
  ChatClient client(TestEndpoint(server.base_url()), MakeHttpTransport());
  EXPECT_EQ(client.Complete(Prompt("over the wire")).text, "{\"final_answer\":\"A\"}");
  EXPECT_EQ(server.request_count(), 1u);
}

TEST(GatewayTest, ConnectionRefusedIsTransportError) {
  std::string url;
  {
    StubServer server([](const std::string&, const std::string&) {
      return std::pair<int, std::string>(200, "");
    });
    url = server.base_url();
  }
  ChatClient client(TestEndpoint(url), MakeHttpTransport());
  try {
    client.Complete(Prompt("x"));
    FAIL();
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTransport);
  }
}

}  // namespace
}  // namespace lsk
