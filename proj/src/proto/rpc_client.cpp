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

#include "ildg/proto/rpc_client.hpp"

#include <fstream>

#include <httplib.h>

namespace ildg::proto {

using nlohmann::json;

namespace {

struct Target {
  std::string base;  // scheme://authority
  std::string path;  // path prefix without trailing '/'
};

Target split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw TransportError("not an absolute URL: " + std::string(url));
  const auto path_start = url.find('/', scheme_end + 3);
  Target t;
  t.base = std::string(url.substr(0, path_start));
  if (path_start != std::string_view::npos) t.path = std::string(url.substr(path_start));
  while (!t.path.empty() && t.path.back() == '/') t.path.pop_back();
  return t;
}

}  // namespace

ResponseEnvelope call(const std::string& endpoint_url, const RequestEnvelope& envelope,
                      const CallOptions& options) {
  const Target target = split_url(endpoint_url);
  httplib::Client client(target.base);
  client.set_connection_timeout(options.connect_timeout);
  client.set_read_timeout(options.read_timeout);
  client.set_keep_alive(false);
  auto res = client.Post(target.path + std::string(kRpcPath), encode(envelope).dump(), "application/json");
  if (!res) {
    throw TransportError("cannot reach " + endpoint_url + ": " + httplib::to_string(res.error()));
  }
  try {
    return decode_response(json::parse(res->body));
  } catch (const std::exception& e) {
    throw TransportError("undecodable reply from " + endpoint_url + " (HTTP " + std::to_string(res->status) +
                         "): " + e.what());
  }
}

RpcClient::RpcClient(std::string principal, std::string token, CallOptions options)
    : principal_(std::move(principal)), token_(std::move(token)), options_(options) {}

json RpcClient::invoke(const std::string& endpoint_url, const std::string& operation, json args) const {
  if (observer_) observer_(endpoint_url, operation);
  RequestEnvelope request{principal_, token_, operation, std::move(args)};
  return call(endpoint_url, request, options_).value();
}

namespace {

[[noreturn]] void raise_http_failure(const std::string& url, int status, const std::string& body) {
  try {
    const ResponseEnvelope env = decode_response(json::parse(body));
    if (!env.ok) throw GridError(env.code, env.message);
  } catch (const GridError& e) {
    if (e.code() != ErrorCode::ParseError) throw;
  } catch (const json::exception&) {
  }
  throw TransportError("HTTP " + std::to_string(status) + " from " + url);
}

}  // namespace

void put_file(const std::string& url, const std::filesystem::path& file, const CallOptions& options) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw TransportError("cannot read " + file.string());
  const auto size = static_cast<std::size_t>(std::filesystem::file_size(file));
  const Target target = split_url(url);
  httplib::Client client(target.base);
  client.set_connection_timeout(options.connect_timeout);
  client.set_read_timeout(options.read_timeout);
  client.set_write_timeout(options.read_timeout);
  client.set_keep_alive(false);
  std::vector<char> buf(1 << 16);
  auto res = client.Put(
      target.path, size,
      [&](std::size_t offset, std::size_t length, httplib::DataSink& sink) {
        in.seekg(static_cast<std::streamoff>(offset));
        const auto want = std::min(length, buf.size());
        in.read(buf.data(), static_cast<std::streamsize>(want));
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) return false;
        return sink.write(buf.data(), got);
      },
      "application/octet-stream");
  if (!res) throw TransportError("upload to " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status / 100 != 2) raise_http_failure(url, res->status, res->body);
}

void put_bytes(const std::string& url, std::string_view bytes, const CallOptions& options) {
  const Target target = split_url(url);
  httplib::Client client(target.base);
  client.set_connection_timeout(options.connect_timeout);
  client.set_read_timeout(options.read_timeout);
  client.set_keep_alive(false);
  auto res = client.Put(target.path, bytes.data(), bytes.size(), "application/octet-stream");
  if (!res) throw TransportError("upload to " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status / 100 != 2) raise_http_failure(url, res->status, res->body);
}

std::uint64_t get_stream(const std::string& url, const std::function<bool(const char*, std::size_t)>& sink,
                         const CallOptions& options) {
  const Target target = split_url(url);
  httplib::Client client(target.base);
  client.set_connection_timeout(options.connect_timeout);
  client.set_read_timeout(options.read_timeout);
  client.set_keep_alive(false);
  int status = 0;
  std::string error_body;
  std::uint64_t received = 0;
  std::int64_t expected = -1;
  auto res = client.Get(
      target.path,
      [&](const httplib::Response& response) {
        status = response.status;
        if (response.has_header("Content-Length")) {
          expected = std::stoll(response.get_header_value("Content-Length"));
        }
        return true;
      },
      [&](const char* data, std::size_t length) {
        if (status / 100 != 2) {
          error_body.append(data, length);
          return true;
        }
        received += length;
        return sink(data, length);
      });
  if (!res) throw TransportError("download from " + url + " failed: " + httplib::to_string(res.error()));
  if (status / 100 != 2) raise_http_failure(url, status, error_body);
  if (expected >= 0 && received != static_cast<std::uint64_t>(expected)) {
    throw TransportError("download from " + url + " truncated");
  }
  return received;
}

}  // namespace ildg::proto
