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

#include "ildg/catalog/catalog_service.hpp"

namespace ildg::catalog {

using nlohmann::json;
using proto::arg_int;
using proto::arg_string;
using proto::CallContext;
using proto::opt_bool;
using proto::opt_int;
using proto::opt_string;

namespace {

DocKind kind_arg(const json& args) {
  const auto name = arg_string(args, "kind");
  auto kind = parse_doc_kind(name);
  if (!kind) fail(ErrorCode::QueryError, "kind must be 'ensemble' or 'configuration', not '" + name + "'");
  return *kind;
}

std::optional<TimePoint> time_arg(const json& args, const char* name) {
  auto text = opt_string(args, name);
  if (!text) return std::nullopt;
  auto t = parse_timestamp(*text);
  if (!t) fail(ErrorCode::QueryError, std::string("malformed ") + name + " timestamp '" + *text + "'");
  return t;
}

std::string target_hint(const json& args) {
  for (const char* key : {"target", "gfn"}) {
    auto it = args.find(key);
    if (it != args.end() && it->is_string()) return it->get<std::string>();
  }
  return "-";
}

json records_json(const std::vector<FlatRecord>& records) {
  json out = json::array();
  for (const auto& r : records) out.push_back(r);
  return out;
}

}  // namespace

void bind_catalog(proto::RpcServer& server, MetadataCatalog& catalog) {
  // Decodes the arguments of a mutating call; a malformed request is audited
  // here because it never reaches the catalog.
  auto decode = [&catalog](const CallContext& ctx, const json& args, auto&& extract) {
    try {
      return extract();
    } catch (const GridError& e) {
      catalog.record_failure(ctx.principal, ctx.operation, target_hint(args), e.code(), e.what());
      throw;
    } catch (const json::exception& e) {
      catalog.record_failure(ctx.principal, ctx.operation, target_hint(args), ErrorCode::ParseError, e.what());
      throw;
    }
  };

  server.handle("insert_ensemble", [&catalog, decode](const CallContext& ctx, const json& args) {
    const auto doc = decode(ctx, args, [&] { return arg_string(args, "document"); });
    return json{{"ensembleId", catalog.insert_ensemble(ctx.principal, doc)}};
  });
  server.handle("insert_config", [&catalog, decode](const CallContext& ctx, const json& args) {
    const auto [doc, gfn] =
        decode(ctx, args, [&] { return std::pair(arg_string(args, "document"), arg_string(args, "gfn")); });
    return json{{"version", catalog.insert_config(ctx.principal, doc, gfn)}};
  });
  server.handle("alter", [&catalog, decode](const CallContext& ctx, const json& args) {
    const auto [target, doc, expected] = decode(ctx, args, [&] {
      return std::tuple(arg_string(args, "target"), arg_string(args, "document"), arg_int(args, "expectedVersion"));
    });
    return json{{"version", catalog.alter(ctx.principal, target, doc, expected)}};
  });
  server.handle("revert", [&catalog, decode](const CallContext& ctx, const json& args) {
    const auto [target, to_version] =
        decode(ctx, args, [&] { return std::pair(arg_string(args, "target"), arg_int(args, "toVersion")); });
    return json{{"version", catalog.revert(ctx.principal, target, to_version)}};
  });
  server.handle("withdraw", [&catalog, decode](const CallContext& ctx, const json& args) {
    catalog.withdraw(ctx.principal, decode(ctx, args, [&] { return arg_string(args, "gfn"); }));
    return json::object();
  });
  server.handle("readmit", [&catalog, decode](const CallContext& ctx, const json& args) {
    catalog.readmit(ctx.principal, decode(ctx, args, [&] { return arg_string(args, "gfn"); }));
    return json::object();
  });

  server.handle("record_transfer", [&catalog, decode](const CallContext& ctx, const json& args) {
    decode(ctx, args, [&] {
      catalog.record_transfer(ctx.principal, arg_string(args, "command"), arg_string(args, "target"),
                              arg_string(args, "outcome"), opt_string(args, "detail").value_or(""));
      return 0;
    });
    return json::object();
  });
  server.handle("discover", [&catalog](const CallContext&, const json& args) {
    const auto predicate = opt_string(args, "predicate").value_or("");
    return json{{"records", records_json(catalog.discover(predicate, opt_bool(args, "includeWithdrawn", false)))}};
  });
  server.handle("query_docs", [&catalog](const CallContext&, const json& args) {
    const auto predicate = opt_string(args, "predicate").value_or("");
    json docs = json::array();
    for (const auto& d : catalog.query_docs(predicate, kind_arg(args), opt_bool(args, "includeWithdrawn", false))) {
      json entry{{"target", d.target}, {"version", d.version}, {"document", d.document}};
      if (d.record) entry["record"] = *d.record;
      docs.push_back(std::move(entry));
    }
    return json{{"documents", std::move(docs)}};
  });
  server.handle("get_doc", [&catalog](const CallContext&, const json& args) {
    const auto target = arg_string(args, "target");
    const auto doc = catalog.get_doc(target, kind_arg(args), opt_int(args, "version"));
    return json{{"document", doc.document}, {"version", doc.version}};
  });
  server.handle("audit_query", [&catalog](const CallContext&, const json& args) {
    AuditFilter filter;
    filter.principal = opt_string(args, "principal");
    filter.operation = opt_string(args, "operation");
    filter.target = opt_string(args, "target");
    filter.since = time_arg(args, "since");
    filter.until = time_arg(args, "until");
    json records = json::array();
    for (const auto& r : catalog.audit_query(filter)) records.push_back(to_json(r));
    return json{{"records", std::move(records)}};
  });

  server.on_auth_failure([&catalog](const proto::RequestEnvelope& request, const std::string& message) {
    if (MetadataCatalog::is_mutating(request.operation)) {
      catalog.record_failure(request.principal, request.operation, target_hint(request.args),
                             ErrorCode::AuthFailed, message);
    }
  });
}

CatalogService::CatalogService(Options options)
    : catalog_(std::move(options.catalog)), server_(std::move(options.tokens)) {
  bind_catalog(server_, catalog_);
  server_.start(options.host, options.port);
  heartbeat_ = registry::start_heartbeat(options.announce, proto::ServiceType::MetadataCatalog, url());
}

CatalogService::~CatalogService() { stop(); }

void CatalogService::stop() {
  heartbeat_.reset();
  server_.stop();
}

}  // namespace ildg::catalog
