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

// ildgd: runs grid services until SIGINT or SIGTERM.
//
//   ildgd registry|catalog|replica|storage|all --tokens FILE [options]
//
// With --ready-file the service's base URL is written there once it is
// listening (for `all`, the registry's URL).

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ildg/catalog/catalog_service.hpp"
#include "ildg/core/error.hpp"
#include "ildg/proto/auth.hpp"
#include "ildg/registry/registry.hpp"
#include "ildg/replica/replica_catalog.hpp"
#include "ildg/storage/storage_endpoint.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ildg;

struct Settings {
  std::string mode;
  std::string host = "127.0.0.1";
  int port = 0;
  std::string tokens_file;
  std::string data_dir;
  std::string site = "local";
  std::vector<std::string> sites{"siteA", "siteB"};
  std::string registry_url;
  std::string principal = "service";
  std::string token;
  std::int64_t ttl_seconds = 30;
  std::int64_t heartbeat_ms = 10000;
  std::int64_t stage_delay_ms = 0;
  std::int64_t pin_lifetime_s = 600;
  bool no_sync = false;
  std::string ready_file;
};

void write_ready(const std::string& path, const std::string& url) {
  if (path.empty()) return;
  const fs::path tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << url << '\n';
  }
  fs::rename(tmp, path);
}

std::optional<registry::Announce> announce_for(const Settings& s, const proto::TokenMap& tokens,
                                               const std::string& registry_url, const std::string& site) {
  if (registry_url.empty()) return std::nullopt;
  registry::Announce a;
  a.registry_url = registry_url;
  a.principal = s.principal;
  a.token = s.token;
  if (a.token.empty()) {
    auto it = tokens.find(s.principal);
    if (it == tokens.end()) throw std::runtime_error("no token for principal '" + s.principal + "' in " + s.tokens_file);
    a.token = it->second;
  }
  a.site = site;
  a.ttl_seconds = s.ttl_seconds;
  a.interval = std::chrono::milliseconds(s.heartbeat_ms);
  return a;
}

store::JournalOptions journal_options(const Settings& s) {
  store::JournalOptions o;
  o.sync = !s.no_sync;
  return o;
}

std::unique_ptr<storage::StorageEndpoint> make_storage(const Settings& s, const proto::TokenMap& tokens,
                                                       const fs::path& root, int port, const std::string& site,
                                                       const std::string& registry_url) {
  storage::StorageEndpoint::Options o;
  o.config.root = root;
  o.config.host = s.host;
  o.config.port = port;
  o.config.site = site;
  o.config.stage_delay = std::chrono::milliseconds(s.stage_delay_ms);
  o.config.pin_lifetime = std::chrono::seconds(s.pin_lifetime_s);
  o.tokens = tokens;
  o.announce = announce_for(s, tokens, registry_url, site);
  return std::make_unique<storage::StorageEndpoint>(std::move(o));
}

int serve(const Settings& s) {
  const auto tokens = proto::load_token_map(s.tokens_file);
  const fs::path data = s.data_dir.empty() ? fs::path(".") : fs::path(s.data_dir);

  std::unique_ptr<registry::RegistryService> reg;
  std::unique_ptr<catalog::CatalogService> cat;
  std::unique_ptr<replica::ReplicaService> rep;
  std::vector<std::unique_ptr<storage::StorageEndpoint>> stores;
  std::string ready_url;

  if (s.mode == "registry" || s.mode == "all") {
    reg = std::make_unique<registry::RegistryService>(registry::RegistryService::Options{s.host, s.port, tokens, {}});
    ready_url = reg->url();
  }
  const std::string registry_url = reg ? reg->url() : s.registry_url;
  const int own_port = s.mode == "all" ? 0 : s.port;

  if (s.mode == "catalog" || s.mode == "all") {
    catalog::CatalogService::Options o;
    o.host = s.host;
    o.port = own_port;
    o.tokens = tokens;
    o.catalog.data_dir = s.mode == "all" ? data / "catalog" : data;
    o.catalog.journal = journal_options(s);
    o.announce = announce_for(s, tokens, registry_url, s.site);
    cat = std::make_unique<catalog::CatalogService>(std::move(o));
    if (ready_url.empty()) ready_url = cat->url();
  }
  if (s.mode == "replica" || s.mode == "all") {
    replica::ReplicaService::Options o;
    o.host = s.host;
    o.port = own_port;
    o.tokens = tokens;
    o.catalog.data_dir = s.mode == "all" ? data / "replica" : data;
    o.catalog.journal = journal_options(s);
    o.announce = announce_for(s, tokens, registry_url, s.site);
    rep = std::make_unique<replica::ReplicaService>(std::move(o));
    if (ready_url.empty()) ready_url = rep->url();
  }
  if (s.mode == "storage") {
    stores.push_back(make_storage(s, tokens, data, s.port, s.site, registry_url));
    ready_url = stores.back()->url();
  }
  if (s.mode == "all") {
    for (const auto& site : s.sites) stores.push_back(make_storage(s, tokens, data / ("storage-" + site), 0, site, registry_url));
  }
  if (ready_url.empty()) throw std::runtime_error("unknown mode '" + s.mode + "'");

  std::cerr << "ildgd: " << s.mode << " listening at " << ready_url << '\n';
  if (s.mode == "all") {
    std::cerr << "ildgd: metadata-catalog at " << cat->url() << '\n'
              << "ildgd: replica-catalog at " << rep->url() << '\n';
    for (const auto& store : stores) {
      std::cerr << "ildgd: storage-endpoint " << store->site() << " at " << store->url() << " (surl "
                << store->surl_for("") << ")\n";
    }
  }
  write_ready(s.ready_file, ready_url);

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  int sig = 0;
  sigwait(&set, &sig);
  std::cerr << "ildgd: shutting down\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Block before any service thread starts so only sigwait sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::signal(SIGPIPE, SIG_IGN);

  Settings s;
  CLI::App app{"ildgd: lattice data grid services", "ildgd"};
  app.add_option("mode", s.mode, "registry | catalog | replica | storage | all")
      ->required()
      ->check(CLI::IsMember({"registry", "catalog", "replica", "storage", "all"}));
  app.add_option("--listen", s.host, "address to bind");
  app.add_option("--port", s.port, "port to bind; 0 picks one");
  app.add_option("--tokens", s.tokens_file, "principal=token file")->required();
  app.add_option("--data-dir,--root", s.data_dir, "state directory (storage root for `storage`)");
  app.add_option("--site", s.site, "site name advertised to the registry");
  app.add_option("--sites", s.sites, "storage sites started by `all`")->delimiter(',');
  app.add_option("--registry", s.registry_url, "registry to announce to");
  app.add_option("--principal", s.principal, "principal used for announcements");
  app.add_option("--token", s.token, "token for --principal (default: from --tokens)");
  app.add_option("--ttl", s.ttl_seconds, "registration lifetime in seconds");
  app.add_option("--heartbeat-ms", s.heartbeat_ms, "re-registration interval");
  app.add_option("--stage-delay-ms", s.stage_delay_ms, "simulated staging latency");
  app.add_option("--pin-lifetime-s", s.pin_lifetime_s, "pin lifetime of staged files");
  app.add_flag("--no-sync", s.no_sync, "skip fdatasync on journal appends");
  app.add_option("--ready-file", s.ready_file, "write the base URL here once listening");
  CLI11_PARSE(app, argc, argv);

  try {
    return serve(s);
  } catch (const std::exception& e) {
    std::cerr << "ildgd: " << e.what() << '\n';
    return 1;
  }
}
