/*
 * Copyright 2026 The ildg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/socket.h>
#include <netinet/in.h>
#include <unistd.h>

#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "ildg/core/clock.hpp"
#include "ildg/proto/auth.hpp"
#include "ildg/proto/envelope.hpp"
#include "ildg/proto/rpc_client.hpp"
#include "ildg/proto/rpc_server.hpp"
#include "ildg/proto/service_descriptor.hpp"
#include "ildg/registry/heartbeat.hpp"
#include "ildg/registry/registry.hpp"
#include "support/harness.hpp"

namespace ildg::proto {
namespace {

using nlohmann::json;

int closed_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

TEST(Envelope, RoundTrip) {
  RequestEnvelope req{"alice", "tok", "discover", json{{"predicate", "nx = 16"}}};
  EXPECT_EQ(decode_request(encode(req)), req);
  const auto ok = ResponseEnvelope::success(json{{"n", 1}});
  EXPECT_EQ(decode_response(encode(ok)), ok);
  const auto err = ResponseEnvelope::failure(ErrorCode::NoReplica, "none");
  EXPECT_EQ(decode_response(encode(err)), err);
  EXPECT_EQ(encode(err), (json{{"status", "error"}, {"code", "NO_REPLICA"}, {"message", "none"}}));
  try {
    err.value();
    FAIL();
  } catch (const GridError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoReplica);
  }
}

TEST(Envelope, MalformedBodiesAreParseErrors) {
  const std::vector<json> requests{
      json::array(),
      json{{"token", "t"}, {"operation", "x"}},
      json{{"principal", 1}, {"token", "t"}, {"operation", "x"}},
      json{{"principal", "a"}, {"token", "t"}, {"operation", "x"}, {"args", json::array()}},
      json{{"principal", ""}, {"token", "t"}, {"operation", "x"}},
  };
  for (const auto& body : requests) {
    try {
      decode_request(body);
      ADD_FAILURE() << body;
    } catch (const GridError& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
  }
  const std::vector<json> responses{
      json{{"status", "maybe"}},
      json{{"status", "ok"}},
      json{{"status", "error"}, {"code", "WHAT"}, {"message", "m"}},
      json{{"status", "error"}, {"code", "NOT_FOUND"}, {"message", "m"}, {"result", 1}},
  };
  for (const auto& body : responses) {
    EXPECT_THROW(decode_response(body), GridError) << body;
  }
}

TEST(Auth, TokenMap) {
  const auto tokens = parse_token_map("# comment\nalice = tok-a\n\nbob=tok-b\r\nnoequals\n");
  EXPECT_EQ(tokens.size(), 2u);
  EXPECT_EQ(authenticate({"alice", "tok-a", "x", {}}, tokens), "alice");
  for (const RequestEnvelope& bad : {RequestEnvelope{"alice", "tok-b", "x", {}},
                                     RequestEnvelope{"alice", "tok-a ", "x", {}},
                                     RequestEnvelope{"alice", "", "x", {}},
                                     RequestEnvelope{"carol", "tok-a", "x", {}}}) {
    try {
      authenticate(bad, tokens);
      ADD_FAILURE();
    } catch (const GridError& e) {
      EXPECT_EQ(e.code(), ErrorCode::AuthFailed);
    }
  }
}

class EchoServer : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.handle("echo", [](const CallContext& ctx, const json& args) {
      return json{{"principal", ctx.principal}, {"args", args}};
    });
    server_.handle("boom", [](const CallContext&, const json&) -> json { fail(ErrorCode::Withdrawn, "gone"); });
    server_.handle("needs", [](const CallContext&, const json& args) {
      return json{{"n", arg_int(args, "n")}, {"s", arg_string(args, "s")}};
    });
    server_.on_auth_failure([this](const RequestEnvelope& r, const std::string&) {
      std::lock_guard lock(mu_);
      rejected_.push_back(r.principal);
    });
    port_ = server_.start("127.0.0.1", 0);
  }
  RpcServer server_{testing::test_tokens()};
  int port_ = 0;
  std::mutex mu_;
  std::vector<std::string> rejected_;
};

TEST_F(EchoServer, AuthenticatedCall) {
  RpcClient client("alice", "tok-alice");
  std::vector<std::string> seen;
  client.set_observer([&](const std::string& url, const std::string& op) { seen.push_back(url + " " + op); });
  const auto r = client.invoke(server_.base_url(), "echo", json{{"x", 1}});
  EXPECT_EQ(r, (json{{"principal", "alice"}, {"args", {{"x", 1}}}}));
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0], server_.base_url() + " echo");
  EXPECT_EQ(server_.base_url(), "http://127.0.0.1:" + std::to_string(port_));
}

TEST_F(EchoServer, ErrorsTravelInTheEnvelope) {
  RpcClient client("alice", "tok-alice");
  auto code = [&](const std::string& op, json args) {
    try {
      client.invoke(server_.base_url(), op, std::move(args));
    } catch (const TransportError&) {
      return std::string("transport");
    } catch (const GridError& e) {
      return std::string(error_code_name(e.code()));
    }
    return std::string("ok");
  };
  EXPECT_EQ(code("boom", json::object()), "WITHDRAWN");
  EXPECT_EQ(code("nope", json::object()), "QUERY_ERROR");
  EXPECT_EQ(code("needs", json{{"s", "x"}}), "PARSE_ERROR");
  EXPECT_EQ(code("needs", json{{"n", "1"}, {"s", "x"}}), "PARSE_ERROR");
  EXPECT_EQ(code("needs", json{{"n", 1}, {"s", "x"}}), "ok");
  RpcClient mallory("alice", "wrong");
  try {
    mallory.invoke(server_.base_url(), "echo");
    FAIL();
  } catch (const GridError& e) {
    EXPECT_EQ(e.code(), ErrorCode::AuthFailed);
  }
  std::lock_guard lock(mu_);
  EXPECT_EQ(rejected_, std::vector<std::string>{"alice"});
}

TEST_F(EchoServer, RawHttpGarbageIsParseError) {
  httplib::Client http("127.0.0.1", port_);
  auto res = http.Post(std::string(kRpcPath), "{not json", "application/json");
  ASSERT_TRUE(res);
  const auto env = decode_response(json::parse(res->body));
  EXPECT_FALSE(env.ok);
  EXPECT_EQ(env.code, ErrorCode::ParseError);
}

TEST_F(EchoServer, BrowserPreflightIsAllowed) {
  httplib::Client http("127.0.0.1", port_);
  auto pre = http.Options(std::string(kRpcPath), {{"Origin", "http://ui.example"},
                                                  {"Access-Control-Request-Method", "POST"}});
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
  EXPECT_EQ(pre->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_NE(pre->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);
  EXPECT_EQ(pre->get_header_value("Access-Control-Allow-Headers"), "Content-Type");
  const json body = encode(RequestEnvelope{"alice", "tok-alice", "echo", json::object()});
  auto res = http.Post(std::string(kRpcPath), {{"Origin", "http://ui.example"}}, body.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_TRUE(decode_response(json::parse(res->body)).ok);
}

TEST_F(EchoServer, ConcurrentCalls) {
  std::atomic<int> ok{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      RpcClient client(t % 2 ? "alice" : "bob", t % 2 ? "tok-alice" : "tok-bob");
      for (int i = 0; i < 20; ++i) {
        const auto r = client.invoke(server_.base_url(), "echo", json{{"i", i}});
        if (r["args"]["i"] == i) ++ok;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 160);
}

TEST(RpcClient, ClosedPortIsTransportFailure) {
  RpcClient client("alice", "tok-alice", CallOptions{std::chrono::milliseconds(500), std::chrono::milliseconds(500)});
  const auto url = "http://127.0.0.1:" + std::to_string(closed_port());
  try {
    client.invoke(url, "echo");
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.code(), ErrorCode::TransferFailed);
  }
  EXPECT_THROW(put_bytes(url + "/ildg/v1/data/00", "x"), TransportError);
}

TEST(ServiceDescriptor, UrlsAndJson) {
  EXPECT_TRUE(is_absolute_url("http://h:1/x"));
  EXPECT_TRUE(is_absolute_url("https://h"));
  EXPECT_FALSE(is_absolute_url("h:1"));
  EXPECT_FALSE(is_absolute_url("http://"));
  EXPECT_EQ(url_authority("http://h:1234/x"), "h:1234");
  EXPECT_EQ(url_authority("nope"), "");
  ServiceDescriptor d{ServiceType::StorageEndpoint, "http://h:1", "siteA", TimePoint{std::chrono::milliseconds(5)}};
  EXPECT_EQ(descriptor_from_json(to_json(d)), d);
  for (auto t : {ServiceType::Registry, ServiceType::MetadataCatalog, ServiceType::ReplicaCatalog,
                 ServiceType::StorageEndpoint}) {
    EXPECT_EQ(parse_service_type(service_type_name(t)), t);
  }
}

}  // namespace
}  // namespace ildg::proto

namespace ildg::registry {
namespace {

TEST(Registry, EntriesLapseAfterTtl) {
  auto clock = std::make_shared<ManualClock>();
  Registry reg(clock);
  reg.register_service(ServiceType::MetadataCatalog, "http://a:1", "siteA", 10);
  reg.register_service(ServiceType::StorageEndpoint, "http://s:2", "siteB", 5);
  reg.register_service(ServiceType::StorageEndpoint, "http://s:1", "siteA", 60);
  auto stores = reg.list_services(ServiceType::StorageEndpoint);
  ASSERT_EQ(stores.size(), 2u);
  EXPECT_EQ(stores[0].site, "siteA");
  clock->advance(std::chrono::milliseconds(4999));
  EXPECT_EQ(reg.list_services(ServiceType::StorageEndpoint).size(), 2u);
  clock->advance(std::chrono::milliseconds(1));
  EXPECT_EQ(reg.list_services(ServiceType::StorageEndpoint).size(), 1u);
  clock->advance(std::chrono::seconds(5));
  reg.register_service(ServiceType::MetadataCatalog, "http://a:1", "siteA", 10);
  clock->advance(std::chrono::seconds(9));
  EXPECT_EQ(reg.list_services(ServiceType::MetadataCatalog).size(), 1u);
  clock->advance(std::chrono::seconds(1));
  EXPECT_TRUE(reg.list_services(ServiceType::MetadataCatalog).empty());
  EXPECT_EQ(reg.list_services(ServiceType::StorageEndpoint).size(), 1u);
  clock->advance(std::chrono::seconds(60));
  EXPECT_EQ(reg.size(), 0u);
}

TEST(Registry, RejectsBadRegistrations) {
  Registry reg(std::make_shared<ManualClock>());
  EXPECT_THROW(reg.register_service(ServiceType::MetadataCatalog, "http://a:1", "", 0), GridError);
  EXPECT_THROW(reg.register_service(ServiceType::MetadataCatalog, "a:1", "", 10), GridError);
}

TEST(Registry, HeartbeatKeepsEntryAlive) {
  auto clock = std::make_shared<ManualClock>();
  RegistryService service({"127.0.0.1", 0, testing::test_tokens(), clock});
  Heartbeat hb({service.url(), "service", "tok-service", ServiceType::ReplicaCatalog, "http://r:1", "siteA", 2,
                std::chrono::milliseconds(20)});
  auto live = [&] { return service.registry().list_services(ServiceType::ReplicaCatalog).size(); };
  for (int i = 0; i < 200 && live() == 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  ASSERT_EQ(live(), 1u);
  for (int i = 0; i < 5; ++i) {
    clock->advance(std::chrono::seconds(1));
    ASSERT_TRUE(hb.beat());
    EXPECT_EQ(live(), 1u);
  }
  hb.stop();
  clock->advance(std::chrono::seconds(2));
  EXPECT_EQ(live(), 0u);

  Heartbeat bad({service.url(), "service", "wrong", ServiceType::ReplicaCatalog, "http://r:2", "siteA", 2,
                 std::chrono::hours(1)});
  EXPECT_FALSE(bad.beat());
}

TEST(Registry, RemoteListing) {
  RegistryService service({"127.0.0.1", 0, testing::test_tokens(), nullptr});
  proto::RpcClient client("alice", "tok-alice");
  client.invoke(service.url(), "register",
                {{"serviceType", "storage-endpoint"}, {"endpointURL", "http://x:9"}, {"site", "s"}, {"ttlSeconds", 60}});
  const auto r = client.invoke(service.url(), "list_services", {{"serviceType", "storage-endpoint"}});
  ASSERT_EQ(r["services"].size(), 1u);
  EXPECT_EQ(proto::descriptor_from_json(r["services"][0]).endpoint_url, "http://x:9");
  try {
    client.invoke(service.url(), "list_services", {{"serviceType", "toaster"}});
    FAIL();
  } catch (const GridError& e) {
    EXPECT_EQ(e.code(), ErrorCode::QueryError);
  }
}

}  // namespace
}  // namespace ildg::registry
