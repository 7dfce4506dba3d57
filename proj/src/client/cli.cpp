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

#include "ildg/client/cli.hpp"

#include <charconv>
#include <iomanip>

#include <CLI11.hpp>

#include "ildg/client/explore.hpp"
#include "ildg/core/gfn.hpp"

namespace ildg::client {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::int64_t parse_int(const std::string& text, const char* what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string(what) + " must be an integer, got '" + text + "'");
  }
  return v;
}

// Splits "<project> <series> <update> <last>" or "<ensembleId> <last>".
std::pair<Target, std::string> parse_target(const std::vector<std::string>& words, const char* command) {
  if (words.size() == 2) return {Target::ensemble(words[0]), words[1]};
  if (words.size() == 4) return {Target::configuration(words[0], words[1], parse_int(words[2], "update")), words[3]};
  throw UsageError(std::string(command) + " expects <project> <series> <update> or <ensembleId>, then one more argument");
}

std::string gfn_label(const GlobalFileName& gfn) {
  const auto& p = gfn.parts();
  return p.project_name + ":" + p.series + ":" + std::to_string(p.update);
}

void report(std::ostream& err, ErrorCode code, std::string_view message) {
  err << "ildg: " << error_code_name(code) << ": " << message << '\n';
}

// Prints per-file outcomes; returns true when every file succeeded.
bool report_batch(const BatchResult& batch, bool verbose, std::ostream& out, std::ostream& err,
                  const std::function<std::string(const FileResult&)>& success_line) {
  for (const auto& f : batch.files) {
    const std::string who = verbose ? f.gfn : f.label;
    if (f.error) {
      err << "ildg: " << who << ": " << error_code_name(*f.error) << ": "
          << (verbose ? f.message : hide_gfns(f.message)) << '\n';
    } else {
      if (f.warning) err << "ildg: warning: " << who << ": " << (verbose ? f.message : hide_gfns(f.message)) << '\n';
      out << success_line(f) << '\n';
    }
  }
  return batch.ok();
}

}  // namespace

std::string hide_gfns(std::string_view text) {
  static constexpr std::string_view kScheme = "gfn://";
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto start = text.find(kScheme, pos);
    if (start == std::string_view::npos) break;
    auto end = start + kScheme.size();
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) &&
           std::string_view("'\",;()[]<>").find(text[end]) == std::string_view::npos) {
      ++end;
    }
    out.append(text.substr(pos, start - pos));
    auto candidate = text.substr(start, end - start);
    // A trailing period or colon is sentence punctuation, not part of the name.
    while (!candidate.empty() && (candidate.back() == '.' || candidate.back() == ':')) {
      candidate.remove_suffix(1);
    }
    if (auto gfn = GlobalFileName::parse(candidate)) out += gfn_label(*gfn);
    else out.append(candidate);
    pos = start + candidate.size();
  }
  out.append(text.substr(pos));
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliOptions& options) {
  CLI::App app{"ildg: lattice data grid client", "ildg"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  bool verbose = false;
  app.add_option("--config", config_path, "client configuration file");
  app.add_flag("-v,--verbose", verbose, "show global file names");

  std::string a1, a2, a3;
  std::vector<std::string> words;
  bool include_withdrawn = false;
  bool as_json = false;
  int parallel = 1;
  std::optional<std::int64_t> expected_version;
  AuditQuery audit_query;

  auto* export_cmd = app.add_subcommand("export-ensemble", "publish an ensemble document");
  export_cmd->add_option("document", a1)->required();

  auto* add_cmd = app.add_subcommand("add", "store a configuration and publish its metadata");
  add_cmd->add_option("data", a1)->required();
  add_cmd->add_option("metadata", a2)->required();
  add_cmd->add_option("surl", a3)->required();

  auto* discover_cmd = app.add_subcommand("discover", "list configurations matching a predicate");
  discover_cmd->add_option("predicate", a1)->required();
  discover_cmd->add_flag("--include-withdrawn", include_withdrawn);

  auto* query_cmd = app.add_subcommand("query", "write metadata documents for matching configurations");
  auto* get_cmd = app.add_subcommand("get", "download data files for matching configurations");
  for (auto* cmd : {query_cmd, get_cmd}) {
    cmd->add_option("predicate", a1)->required();
    cmd->add_option("template", a2)->required();
    cmd->add_option("fields", a3)->required();
    cmd->add_option("--parallel", parallel)->check(CLI::PositiveNumber);
  }
  query_cmd->add_flag("--include-withdrawn", include_withdrawn);

  auto* replicate_cmd = app.add_subcommand("replicate", "copy matching files to another storage site");
  replicate_cmd->add_option("predicate", a1)->required();
  replicate_cmd->add_option("destination", a2)->required();
  replicate_cmd->add_option("--parallel", parallel)->check(CLI::PositiveNumber);

  auto* alter_cmd = app.add_subcommand("alter", "publish a revised document");
  alter_cmd->add_option("target", words, "<project> <series> <update> <document> | <ensembleId> <document>")
      ->required();
  alter_cmd->add_option("--expected-version", expected_version);

  auto* revert_cmd = app.add_subcommand("revert", "restore an earlier document version");
  revert_cmd->add_option("target", words, "<project> <series> <update> <version> | <ensembleId> <version>")
      ->required();

  auto* withdraw_cmd = app.add_subcommand("withdraw", "hide a configuration from discovery");
  auto* readmit_cmd = app.add_subcommand("readmit", "undo a withdrawal");
  for (auto* cmd : {withdraw_cmd, readmit_cmd}) {
    cmd->add_option("project", a1)->required();
    cmd->add_option("series", a2)->required();
    cmd->add_option("update", a3)->required();
  }

  auto* audit_cmd = app.add_subcommand("audit", "show the mutation log");
  audit_cmd->add_option("--principal", audit_query.principal);
  audit_cmd->add_option("--op", audit_query.operation);
  audit_cmd->add_option("--target", audit_query.target);
  audit_cmd->add_option("--since", audit_query.since);
  audit_cmd->add_option("--until", audit_query.until);

  auto* explore_cmd = app.add_subcommand("explore", "browse institution / project / series");
  explore_cmd->add_option("predicate", a1);
  explore_cmd->add_flag("--include-withdrawn", include_withdrawn);
  explore_cmd->add_flag("--json", as_json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ildg: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    ClientConfig config = load_client_config(config_path.empty() ? default_config_path() : std::filesystem::path(config_path));
    GridClient client(std::move(config), options.hooks);
    if (options.observer) client.set_observer(options.observer);
    auto shown = [verbose](const std::string& text) { return verbose ? text : hide_gfns(text); };

    if (*export_cmd) {
      out << client.export_ensemble(a1) << '\n';
      return 0;
    }
    if (*add_cmd) {
      const std::string gfn = client.add(a1, a2, a3);
      out << "added " << (verbose ? gfn : hide_gfns(gfn)) << '\n';
      return 0;
    }
    if (*discover_cmd) {
      const auto records = client.discover(a1, include_withdrawn);
      std::vector<std::string_view> columns;
      for (const auto& c : flat_columns()) {
        if (verbose || c.name != "gfn") columns.push_back(c.name);
      }
      for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "\t" : "") << columns[i];
      out << '\n';
      for (const auto& r : records) {
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "\t" : "") << column_text(r, columns[i]);
        out << '\n';
      }
      return 0;
    }
    if (*query_cmd || *get_cmd) {
      const auto tmpl = FilenameTemplate::parse(a2, a3);
      const auto batch = *get_cmd ? client.get(a1, tmpl, parallel) : client.query(a1, tmpl, include_withdrawn, parallel);
      return report_batch(batch, verbose, out, err, [](const FileResult& f) { return "wrote " + f.path; }) ? 0 : 1;
    }
    if (*replicate_cmd) {
      const auto batch = client.replicate(a1, a2, parallel);
      return report_batch(batch, verbose, out, err,
                          [&](const FileResult& f) { return "replicated " + (verbose ? f.gfn : f.label); })
                 ? 0
                 : 1;
    }
    if (*alter_cmd) {
      const auto [target, document] = parse_target(words, "alter");
      const auto version = client.alter(target, document, expected_version);
      out << "version " << version << '\n';
      return 0;
    }
    if (*revert_cmd) {
      const auto [target, version] = parse_target(words, "revert");
      const auto reverted = client.revert(target, parse_int(version, "version"));
      out << "version " << reverted << '\n';
      return 0;
    }
    if (*withdraw_cmd || *readmit_cmd) {
      const auto target = Target::configuration(a1, a2, parse_int(a3, "update"));
      if (*withdraw_cmd) client.withdraw(target);
      else client.readmit(target);
      out << (*withdraw_cmd ? "withdrawn " : "readmitted ") << a1 << ':' << a2 << ':' << a3 << '\n';
      return 0;
    }
    if (*audit_cmd) {
      out << "timestamp\tprincipal\toperation\ttarget\toutcome\tdetail\n";
      for (const auto& r : client.audit(audit_query)) {
        out << r.at("timestamp").get<std::string>() << '\t' << r.at("principal").get<std::string>() << '\t'
            << r.at("operation").get<std::string>() << '\t' << shown(r.at("target").get<std::string>()) << '\t'
            << r.at("outcome").get<std::string>() << '\t' << shown(r.at("detail").get<std::string>()) << '\n';
      }
      return 0;
    }
    if (*explore_cmd) {
      const auto tree = build_explore_tree(client.discover(a1, include_withdrawn));
      if (as_json) out << explore_to_json(tree).dump(2) << '\n';
      else out << render_explore_tree(tree);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "ildg: usage: " << e.what() << '\n';
    return 2;
  } catch (const GridError& e) {
    report(err, e.code(), verbose ? e.what() : hide_gfns(e.what()));
    return 1;
  } catch (const std::exception& e) {
    report(err, ErrorCode::TransferFailed, verbose ? e.what() : hide_gfns(e.what()));
    return 1;
  }
  return 2;
}

}  // namespace ildg::client
