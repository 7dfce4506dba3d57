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

#include "ildg/proto/rpc_server.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace ildg::proto {

using nlohmann::json;

struct RpcServer::Impl {
  TokenMap tokens;
  std::map<std::string, Handler, std::less<>> handlers;
  AuthFailureHook auth_failure;
  httplib::Server server;
  std::thread thread;
  std::string host;
  int port = 0;
};

RpcServer::RpcServer(TokenMap tokens) : impl_(std::make_unique<Impl>()) {
  impl_->tokens = std::move(tokens);
  impl_->server.new_task_queue = [] { return new httplib::ThreadPool(16); };
  impl_->server.set_keep_alive_max_count(1);
  // Browser clients are served from elsewhere; credentials travel in the
  // envelope, never in cookies.
  impl_->server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  impl_->server.Options(R"(/ildg/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
    res.status = 204;
  });
  impl_->server.Post(std::string(kRpcPath), [this](const httplib::Request& req, httplib::Response& res) {
    ResponseEnvelope response;
    try {
      response = dispatch(decode_request(json::parse(req.body)));
    } catch (const json::exception& e) {
      response = ResponseEnvelope::failure(ErrorCode::ParseError, std::string("malformed envelope: ") + e.what());
      res.status = 400;
    } catch (const GridError& e) {
      response = ResponseEnvelope::failure(e.code(), e.what());
      res.status = 400;
    }
    res.set_content(encode(response).dump(), "application/json");
  });
}

RpcServer::~RpcServer() { stop(); }

void RpcServer::handle(std::string operation, Handler handler) {
  impl_->handlers[std::move(operation)] = std::move(handler);
}

void RpcServer::on_auth_failure(AuthFailureHook hook) { impl_->auth_failure = std::move(hook); }

ResponseEnvelope RpcServer::dispatch(const RequestEnvelope& request) const {
  CallContext ctx;
  try {
    ctx.principal = authenticate(request, impl_->tokens);
  } catch (const GridError& e) {
    if (impl_->auth_failure) impl_->auth_failure(request, e.what());
    return ResponseEnvelope::failure(e.code(), e.what());
  }
  ctx.operation = request.operation;
  auto it = impl_->handlers.find(request.operation);
  if (it == impl_->handlers.end()) {
    return ResponseEnvelope::failure(ErrorCode::QueryError, "unknown operation '" + request.operation + "'");
  }
  try {
    return ResponseEnvelope::success(it->second(ctx, request.args));
  } catch (const GridError& e) {
    return ResponseEnvelope::failure(e.code(), e.what());
  } catch (const json::exception& e) {
    return ResponseEnvelope::failure(ErrorCode::ParseError, std::string("malformed arguments: ") + e.what());
  } catch (const std::exception& e) {
    return ResponseEnvelope::failure(ErrorCode::TransferFailed, std::string("internal error: ") + e.what());
  }
}

httplib::Server& RpcServer::http() { return impl_->server; }

int RpcServer::start(const std::string& host, int port) {
  auto& server = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
  } else if (!server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->host = host;
  impl_->port = bound;
  impl_->thread = std::thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  return bound;
}

void RpcServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

int RpcServer::port() const { return impl_->port; }

std::string RpcServer::base_url() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

namespace {

[[noreturn]] void bad_arg(const char* name, const char* expected) {
  fail(ErrorCode::ParseError, std::string("argument '") + name + "' must be " + expected);
}

}  // namespace

std::string arg_string(const json& args, const char* name) {
  auto v = opt_string(args, name);
  if (!v) bad_arg(name, "a string");
  return *v;
}

std::optional<std::string> opt_string(const json& args, const char* name) {
  auto it = args.find(name);
  if (it == args.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad_arg(name, "a string");
  return it->get<std::string>();
}

std::int64_t arg_int(const json& args, const char* name) {
  auto v = opt_int(args, name);
  if (!v) bad_arg(name, "an integer");
  return *v;
}

std::optional<std::int64_t> opt_int(const json& args, const char* name) {
  auto it = args.find(name);
  if (it == args.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) bad_arg(name, "an integer");
  return it->get<std::int64_t>();
}

bool opt_bool(const json& args, const char* name, bool fallback) {
  auto it = args.find(name);
  if (it == args.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) bad_arg(name, "a boolean");
  return it->get<bool>();
}

}  // namespace ildg::proto
