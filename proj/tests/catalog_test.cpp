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

#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "ildg/catalog/catalog_service.hpp"
#include "ildg/catalog/metadata_catalog.hpp"
#include "ildg/catalog/predicate.hpp"
#include "ildg/core/gfn.hpp"
#include "ildg/core/qcdml.hpp"
#include "ildg/proto/rpc_client.hpp"
#include "support/harness.hpp"
#include "support/oracle.hpp"

namespace ildg::catalog {
namespace {

using nlohmann::json;
namespace t = ildg::testing;

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const GridError& e) {
    return std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return "ok";
}

std::string code_of(const std::function<void()>& f) {
  const auto s = error_of(f);
  return s.substr(0, s.find(':'));
}

std::vector<std::string> gfns(const std::vector<FlatRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(r.gfn);
  return out;
}

TEST(Predicate, SessionPredicateParses) {
  const auto p = Predicate::parse("institution = 'Fermilab' AND date = '2003-12-03'");
  ASSERT_NE(p.root(), nullptr);
  EXPECT_EQ(p.root()->kind, Expr::Kind::And);
  EXPECT_EQ(p.root()->lhs->comparison.column, "institution");
  EXPECT_EQ(p.root()->rhs->comparison.literal.text, "2003-12-03");
  EXPECT_TRUE(Predicate::parse("").match_all());
  EXPECT_TRUE(Predicate::parse("  \n").match_all());
}

TEST(Predicate, Precedence) {
  const auto p = Predicate::parse("nx = 1 or nx = 2 AND NOT ny = 3");
  ASSERT_EQ(p.root()->kind, Expr::Kind::Or);
  EXPECT_EQ(p.root()->rhs->kind, Expr::Kind::And);
  EXPECT_EQ(p.root()->rhs->rhs->kind, Expr::Kind::Not);
  const auto q = Predicate::parse("(nx = 1 OR nx = 2) AND ny = 3");
  EXPECT_EQ(q.root()->kind, Expr::Kind::And);
}

TEST(Predicate, ErrorsNamePosition) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"institutoin = 'X'", "QUERY_ERROR: query error at position 1: unknown column 'institutoin'"},
      {"nx = 'a'", "QUERY_ERROR: query error at position 6: literal type does not match column 'nx'"},
      {"institution = 16", "QUERY_ERROR: query error at position 15: literal type does not match column 'institution'"},
      {"withdrawn < true", "QUERY_ERROR: query error at position 11: boolean column 'withdrawn' supports only = and !="},
      {"nx = 1 AND", "QUERY_ERROR: query error at position 11: unexpected end of predicate"},
      {"institution = 'Fermilab", "QUERY_ERROR: query error at position 15: unterminated string literal"},
      {"(nx = 1", "QUERY_ERROR: query error at position 8: expected ')'"},
      {"nx = 1)", "QUERY_ERROR: query error at position 7: unexpected ')'"},
      {"nx == 1", "QUERY_ERROR: query error at position 5: expected literal"},
      {"nx = 1.", "QUERY_ERROR: query error at position 7: malformed number"},
      {"nx = 1e3", "QUERY_ERROR: query error at position 7: malformed number"},
      {"nx ~ 1", "QUERY_ERROR: query error at position 4: unexpected character '~'"},
      {"nx 1", "QUERY_ERROR: query error at position 4: expected comparison operator"},
  };
  for (const auto& [text, expected] : cases) {
    EXPECT_EQ(error_of([&] { Predicate::parse(text); }), expected) << text;
  }
}

TEST(Predicate, RandomExpressionsAgreeWithReferenceScan) {
  t::DocGenerator gen(2024);
  const auto fixture = t::make_fixture(gen, 12, 80);
  const auto rows = fixture.rows();
  std::vector<FlatRecord> records;
  for (const auto& e : fixture.entries) records.push_back(flatten(e.latest(), e.ensemble, e.withdrawn, e.version()));
  std::mt19937_64 rng(77);
  std::size_t matched = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto node = t::random_predicate(rng, rows);
    const auto text = t::render(*node, rng);
    const auto p = Predicate::parse(text);
    for (std::size_t k = 0; k < records.size(); ++k) {
      const bool expected = t::evaluate(*node, rows[k]);
      ASSERT_EQ(p.matches(records[k]), expected) << text << "\nrecord " << records[k].gfn;
      matched += expected;
    }
  }
  // Non-trivial coverage: both outcomes occur often.
  EXPECT_GT(matched, 3000u * 80u / 10u);
  EXPECT_LT(matched, 3000u * 80u * 9u / 10u);
}

TEST(Predicate, QuotesAndDecimals) {
  FlatRecord r;
  r.institution = "O'Brien Lab";
  r.beta = "5.70";
  r.ave_plaquette = "";
  EXPECT_TRUE(Predicate::parse("institution = 'O''Brien Lab'").matches(r));
  EXPECT_TRUE(Predicate::parse("beta = 5.7").matches(r));
  EXPECT_TRUE(Predicate::parse("beta = 5.700000").matches(r));
  EXPECT_TRUE(Predicate::parse("beta < 10").matches(r));
  EXPECT_FALSE(Predicate::parse("avePlaquette = 0").matches(r));
  EXPECT_FALSE(Predicate::parse("avePlaquette < 1").matches(r));
  EXPECT_FALSE(Predicate::parse("avePlaquette >= -1").matches(r));
  EXPECT_TRUE(Predicate::parse("avePlaquette != 0").matches(r));
  EXPECT_TRUE(Predicate::parse("NOT avePlaquette = 0").matches(r));
  EXPECT_TRUE(Predicate::parse("withdrawn = false").matches(r));
  EXPECT_TRUE(Predicate::parse("withdrawn != TRUE").matches(r));
}

class CatalogTest : public ::testing::Test {
 protected:
  std::unique_ptr<MetadataCatalog> open() {
    return std::make_unique<MetadataCatalog>(
        MetadataCatalog::Options{dir_.path() / "catalog", clock_, store::JournalOptions{false, 7}});
  }
  std::string insert_sample(MetadataCatalog& cat, std::int64_t update = 102) {
    const auto c = parse_config_doc(t::sample_config_xml(update), IntegrityFill{"cbf43926", 9});
    const auto gfn = derive_gfn(c, parse_ensemble_doc(t::sample_ensemble_xml())).str();
    cat.insert_config("alice", serialize_doc(c), gfn);
    return gfn;
  }
  t::TempDir dir_;
  std::shared_ptr<ManualClock> clock_ = std::make_shared<ManualClock>();
};

TEST_F(CatalogTest, InsertAndDiscover) {
  auto cat = open();
  EXPECT_EQ(cat->insert_ensemble("alice", t::sample_ensemble_xml()), "mc://fnal.gov/myProject");
  EXPECT_EQ(code_of([&] { cat->insert_ensemble("alice", t::sample_ensemble_xml()); }), "DUPLICATE_ENSEMBLE");
  EXPECT_EQ(code_of([&] { cat->insert_ensemble("alice", "<ensemble>"); }), "PARSE_ERROR");
  const auto gfn = insert_sample(*cat);
  EXPECT_EQ(gfn, "gfn://fnal.gov/myProject/1/102");
  const auto rows = cat->discover("institution = 'Fermilab' AND date = '2003-12-03'", false);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].gfn, gfn);
  EXPECT_EQ(rows[0].version, 1);
  EXPECT_TRUE(cat->discover("date = '2003-12-04'", false).empty());
  EXPECT_EQ(code_of([&] { cat->discover("institutoin = 'X'", false); }), "QUERY_ERROR");
}

TEST_F(CatalogTest, InsertConfigErrors) {
  auto cat = open();
  const auto c = parse_config_doc(t::sample_config_xml(), IntegrityFill{"cbf43926", 9});
  const auto doc = serialize_doc(c);
  EXPECT_EQ(code_of([&] { cat->insert_config("alice", doc, "gfn://fnal.gov/myProject/1/102"); }),
            "ENSEMBLE_NOT_FOUND");
  cat->insert_ensemble("alice", t::sample_ensemble_xml());
  EXPECT_EQ(code_of([&] { cat->insert_config("alice", doc, "gfn://fnal.gov/myProject/1/103"); }), "KEY_MISMATCH");
  EXPECT_EQ(code_of([&] { cat->insert_config("alice", t::sample_config_xml(), "gfn://fnal.gov/myProject/1/102"); }),
            "PARSE_ERROR");
  cat->insert_config("alice", doc, "gfn://fnal.gov/myProject/1/102");
  EXPECT_EQ(code_of([&] { cat->insert_config("alice", doc, "gfn://fnal.gov/myProject/1/102"); }), "DUPLICATE_GFN");
  auto other = parse_ensemble_doc(t::sample_ensemble_xml());
  other.ensemble_id = "mc://fnal.gov/another";
  EXPECT_EQ(code_of([&] { cat->insert_ensemble("alice", serialize_doc(other)); }), "DUPLICATE_ENSEMBLE");
  EXPECT_EQ(cat->discover("", true).size(), 1u);
}

TEST_F(CatalogTest, AlterRevertHistory) {
  auto cat = open();
  cat->insert_ensemble("alice", t::sample_ensemble_xml());
  const auto gfn = insert_sample(*cat);
  const auto v1 = cat->get_doc(gfn, DocKind::Configuration, std::nullopt);
  auto c = parse_config_doc(v1.document);
  c.ave_plaquette = "0.59";
  EXPECT_EQ(cat->alter("alice", gfn, serialize_doc(c), 1), 2);
  EXPECT_EQ(code_of([&] { cat->alter("alice", gfn, serialize_doc(c), 1); }), "VERSION_CONFLICT");
  EXPECT_EQ(parse_config_doc(cat->get_doc(gfn, DocKind::Configuration, 1).document), parse_config_doc(v1.document));
  auto moved = c;
  moved.series = "2";
  EXPECT_EQ(code_of([&] { cat->alter("alice", gfn, serialize_doc(moved), 2); }), "KEY_MISMATCH");
  auto resized = c;
  resized.size = 10;
  EXPECT_EQ(code_of([&] { cat->alter("alice", gfn, serialize_doc(resized), 2); }), "KEY_MISMATCH");
  EXPECT_EQ(code_of([&] { cat->alter("alice", "gfn://fnal.gov/x/1/1", serialize_doc(c), 1); }), "NOT_FOUND");
  EXPECT_EQ(code_of([&] { cat->alter("alice", gfn, "<configuration/>", 2); }), "PARSE_ERROR");
  c.date = "2003-12-05";
  EXPECT_EQ(cat->alter("alice", gfn, serialize_doc(c), 2), 3);
  EXPECT_EQ(cat->discover("", false).at(0).date, "2003-12-05");
  EXPECT_EQ(cat->discover("", false).at(0).version, 3);

  EXPECT_EQ(cat->revert("alice", gfn, 1), 4);
  EXPECT_EQ(parse_config_doc(cat->get_doc(gfn, DocKind::Configuration, 4).document), parse_config_doc(v1.document));
  EXPECT_EQ(cat->get_doc(gfn, DocKind::Configuration, 2).document.find("0.59") != std::string::npos, true);
  EXPECT_EQ(cat->get_doc(gfn, DocKind::Configuration, std::nullopt).version, 4);
  EXPECT_EQ(code_of([&] { cat->revert("alice", gfn, 4); }), "NOTHING_TO_REVERT");
  EXPECT_EQ(code_of([&] { cat->revert("alice", gfn, 0); }), "NOT_FOUND");
  EXPECT_EQ(code_of([&] { cat->get_doc(gfn, DocKind::Configuration, 99); }), "NOT_FOUND");

  const auto second = insert_sample(*cat, 104);
  EXPECT_EQ(code_of([&] { cat->revert("alice", second, 1); }), "NOTHING_TO_REVERT");

  auto e = parse_ensemble_doc(t::sample_ensemble_xml());
  e.collaboration = "MILC";
  EXPECT_EQ(cat->alter("bob", e.ensemble_id, serialize_doc(e), 1), 2);
  EXPECT_EQ(cat->discover("collaboration = 'MILC'", false).size(), 2u);
  EXPECT_EQ(cat->get_doc(gfn, DocKind::Ensemble, std::nullopt).version, 2);
  e.project_name = "renamed";
  EXPECT_EQ(code_of([&] { cat->alter("bob", e.ensemble_id, serialize_doc(e), 2); }), "KEY_MISMATCH");
}

TEST_F(CatalogTest, WithdrawReadmitAndQueryDocs) {
  auto cat = open();
  cat->insert_ensemble("alice", t::sample_ensemble_xml());
  const auto a = insert_sample(*cat, 102);
  const auto b = insert_sample(*cat, 104);
  cat->withdraw("alice", a);
  cat->withdraw("alice", a);
  EXPECT_EQ(gfns(cat->discover("", false)), std::vector<std::string>{b});
  const auto all = cat->discover("", true);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_TRUE(all[0].withdrawn);
  EXPECT_EQ(all[0].version, 1);
  EXPECT_NO_THROW(cat->get_doc(a, DocKind::Configuration, std::nullopt));
  EXPECT_EQ(cat->query_docs("", DocKind::Configuration, false).size(), 1u);
  const auto ens = cat->query_docs("", DocKind::Ensemble, true);
  ASSERT_EQ(ens.size(), 1u);
  EXPECT_EQ(ens[0].target, "mc://fnal.gov/myProject");
  EXPECT_TRUE(cat->query_docs("nx = 99", DocKind::Configuration, true).empty());
  cat->readmit("alice", a);
  EXPECT_EQ(cat->discover("", false).size(), 2u);
  EXPECT_EQ(code_of([&] { cat->withdraw("alice", "gfn://fnal.gov/none/1/1"); }), "NOT_FOUND");
}

TEST_F(CatalogTest, WithdrawInvisibilityProperty) {
  auto cat = open();
  t::DocGenerator gen(8);
  const auto fixture = t::make_fixture(gen, 6, 40);
  for (const auto& e : fixture.ensembles) cat->insert_ensemble("alice", serialize_doc(e));
  for (const auto& e : fixture.entries) {
    cat->insert_config("alice", serialize_doc(e.original), e.gfn);
    if (e.withdrawn) cat->withdraw("alice", e.gfn);
  }
  std::mt19937_64 rng(3);
  const auto rows = fixture.rows();
  for (int i = 0; i < 200; ++i) {
    const auto text = t::render(*t::random_predicate(rng, rows), rng);
    auto visible = cat->discover(text, false);
    auto everything = cat->discover(text, true);
    std::erase_if(everything, [](const FlatRecord& r) { return r.withdrawn; });
    ASSERT_EQ(visible, everything) << text;
  }
}

TEST_F(CatalogTest, AuditCountsEveryAttempt) {
  auto cat = open();
  std::size_t attempts = 0;
  auto attempt = [&](const std::function<void()>& f) {
    ++attempts;
    clock_->advance(std::chrono::milliseconds(10));
    try {
      f();
    } catch (const GridError&) {
    }
  };
  attempt([&] { cat->insert_ensemble("alice", t::sample_ensemble_xml()); });
  attempt([&] { cat->insert_ensemble("bob", t::sample_ensemble_xml()); });
  attempt([&] { insert_sample(*cat); });
  attempt([&] { cat->withdraw("bob", "gfn://fnal.gov/myProject/1/102"); });
  attempt([&] { cat->readmit("bob", "gfn://nowhere/x/1/1"); });
  attempt([&] { cat->revert("alice", "gfn://fnal.gov/myProject/1/102", 1); });
  attempt([&] { cat->record_failure("mallory", "alter", "-", ErrorCode::AuthFailed, "bad token"); });
  cat->discover("", true);
  cat->get_doc("mc://fnal.gov/myProject", DocKind::Ensemble, std::nullopt);
  const auto all = cat->audit_query({});
  ASSERT_EQ(all.size(), attempts);
  EXPECT_EQ(cat->audit_size(), attempts);
  EXPECT_EQ(all[0].principal, "alice");
  EXPECT_EQ(all[0].operation, "insert_ensemble");
  EXPECT_EQ(all[0].target, "mc://fnal.gov/myProject");
  EXPECT_EQ(all[0].outcome, "ok");
  EXPECT_EQ(all[1].outcome, "DUPLICATE_ENSEMBLE");
  EXPECT_EQ(all[2].target, "gfn://fnal.gov/myProject/1/102");
  EXPECT_EQ(all[4].outcome, "NOT_FOUND");
  EXPECT_EQ(all[5].outcome, "NOTHING_TO_REVERT");
  EXPECT_EQ(all[6].principal, "mallory");
  EXPECT_EQ(all[6].outcome, "AUTH_FAILED");
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LE(all[i - 1].timestamp, all[i].timestamp);

  EXPECT_EQ(cat->audit_query({.principal = "bob"}).size(), 3u);
  EXPECT_TRUE(cat->audit_query({.operation = "alter", .target = "gfn://x"}).empty());
  EXPECT_EQ(cat->audit_query({.target = "gfn://fnal.gov/myProject/1/102"}).size(), 3u);
  const auto t2 = all[2].timestamp;
  EXPECT_EQ(cat->audit_query({.since = t2, .until = t2}).size(), 1u);
  EXPECT_EQ(cat->audit_query({.since = t2}).size(), attempts - 2);
  EXPECT_EQ(code_of([&] { cat->audit_query({.since = t2, .until = all[0].timestamp}); }), "QUERY_ERROR");
  for (const auto& r : all) EXPECT_EQ(audit_record_from_json(to_json(r)), r);
}

TEST_F(CatalogTest, TransferOutcomesAreAuditedAndSurviveReopen) {
  std::vector<AuditRecord> before;
  {
    auto cat = open();
    cat->insert_ensemble("alice", t::sample_ensemble_xml());
    const auto gfn = insert_sample(*cat);
    const auto rows = cat->discover("", true);
    for (int i = 0; i < 20; ++i) {
      clock_->advance(std::chrono::milliseconds(1));
      cat->record_transfer(i % 2 ? "bob" : "alice", "replicate", gfn, i % 3 ? "ok" : "TRANSFER_FAILED", "siteB");
    }
    cat->record_transfer("alice", "add", "gfn://fnal.gov/myProject/1/7", "NO_REPLICA", "x");
    EXPECT_EQ(code_of([&] { cat->record_transfer("alice", "add", gfn, "ok", ""); }), "QUERY_ERROR");
    EXPECT_EQ(code_of([&] { cat->record_transfer("alice", "alter", gfn, "ok", ""); }), "QUERY_ERROR");
    EXPECT_EQ(code_of([&] { cat->record_transfer("alice", "replicate", gfn, "MAYBE", ""); }), "QUERY_ERROR");
    EXPECT_EQ(cat->discover("", true), rows);
    before = cat->audit_query({});
    EXPECT_EQ(before.size(), 23u);
    AuditFilter f;
    f.operation = "replicate";
    f.principal = "bob";
    EXPECT_EQ(cat->audit_query(f).size(), 10u);
  }
  auto cat = open();
  EXPECT_EQ(cat->audit_query({}), before);
  EXPECT_EQ(cat->discover("", true).size(), 1u);
}

TEST_F(CatalogTest, ReopenRecoversEverything) {
  t::DocGenerator gen(12);
  const auto fixture = t::make_fixture(gen, 5, 30);
  std::vector<FlatRecord> before;
  std::vector<AuditRecord> audit_before;
  {
    auto cat = open();
    for (const auto& e : fixture.ensembles) cat->insert_ensemble("alice", serialize_doc(e));
    for (const auto& e : fixture.entries) {
      clock_->advance(std::chrono::milliseconds(3));
      cat->insert_config("bob", serialize_doc(e.original), e.gfn);
      if (e.altered) cat->alter("bob", e.gfn, serialize_doc(*e.altered), 1);
      if (e.withdrawn) cat->withdraw("alice", e.gfn);
      try {
        cat->revert("alice", e.gfn, 5);
      } catch (const GridError&) {
      }
    }
    before = cat->discover("", true);
    audit_before = cat->audit_query({});
  }
  // Every record, version and flag equals the reference model.
  std::vector<std::string> expected;
  for (const auto& e : fixture.entries) expected.push_back(e.gfn);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(gfns(before), expected);
  for (const auto& r : before) {
    const auto& entry = *std::find_if(fixture.entries.begin(), fixture.entries.end(),
                                      [&](const auto& e) { return e.gfn == r.gfn; });
    EXPECT_EQ(r.version, entry.version());
    EXPECT_EQ(r.withdrawn, entry.withdrawn);
    EXPECT_EQ(r.crc32, entry.latest().crc32);
  }
  auto cat = open();
  EXPECT_EQ(cat->discover("", true), before);
  EXPECT_EQ(cat->audit_query({}), audit_before);
  const auto more = cat->audit_query({}).size();
  clock_->advance(std::chrono::milliseconds(1));
  cat->withdraw("alice", fixture.entries[0].gfn);
  EXPECT_EQ(cat->audit_size(), more + 1);
}

TEST_F(CatalogTest, ConcurrentMutationsKeepVersionsGapFree) {
  auto cat = open();
  cat->insert_ensemble("alice", t::sample_ensemble_xml());
  const auto gfn = insert_sample(*cat);
  std::vector<std::thread> threads;
  std::atomic<int> wins{0};
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      for (int k = 0; k < 25; ++k) {
        const auto cur = cat->get_doc(gfn, DocKind::Configuration, std::nullopt);
        auto c = parse_config_doc(cur.document);
        c.ave_plaquette = "0." + std::to_string(i) + std::to_string(k);
        try {
          cat->alter(i % 2 ? "alice" : "bob", gfn, serialize_doc(c), cur.version);
          ++wins;
        } catch (const GridError& e) {
          if (e.code() != ErrorCode::VersionConflict) throw;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  const auto latest = cat->get_doc(gfn, DocKind::Configuration, std::nullopt).version;
  EXPECT_EQ(latest, 1 + wins.load());
  for (std::int64_t v = 1; v <= latest; ++v) EXPECT_NO_THROW(cat->get_doc(gfn, DocKind::Configuration, v));
  EXPECT_EQ(cat->audit_size(), 2u + 100u);
}

TEST(CatalogService, RejectedMutationsAreAudited) {
  t::TempDir dir;
  CatalogService svc({"127.0.0.1", 0, t::test_tokens(), {dir / "cat", nullptr, {false, 1000}}, std::nullopt});
  proto::RpcClient alice("alice", "tok-alice");
  proto::RpcClient mallory("alice", "stolen");
  EXPECT_EQ(alice.invoke(svc.url(), "insert_ensemble", {{"document", t::sample_ensemble_xml()}})["ensembleId"],
            "mc://fnal.gov/myProject");
  EXPECT_EQ(code_of([&] { mallory.invoke(svc.url(), "withdraw", {{"gfn", "gfn://a/b/c/1"}}); }), "AUTH_FAILED");
  EXPECT_EQ(code_of([&] { mallory.invoke(svc.url(), "discover", json::object()); }), "AUTH_FAILED");
  EXPECT_EQ(code_of([&] { alice.invoke(svc.url(), "alter", {{"target", "x"}}); }), "PARSE_ERROR");
  EXPECT_EQ(code_of([&] { alice.invoke(svc.url(), "revert", {{"target", "x"}, {"toVersion", "1"}}); }),
            "PARSE_ERROR");
  const auto audit = alice.invoke(svc.url(), "audit_query", json::object())["records"];
  ASSERT_EQ(audit.size(), 4u);
  EXPECT_EQ(audit[1]["operation"], "withdraw");
  EXPECT_EQ(audit[1]["outcome"], "AUTH_FAILED");
  EXPECT_EQ(audit[2]["operation"], "alter");
  EXPECT_EQ(audit[2]["outcome"], "PARSE_ERROR");
  EXPECT_EQ(audit[3]["target"], "x");

  const auto found = alice.invoke(svc.url(), "discover", {{"predicate", "institution = 'Fermilab'"}})["records"];
  EXPECT_TRUE(found.empty());
  EXPECT_EQ(code_of([&] { alice.invoke(svc.url(), "query_docs", {{"kind", "thing"}}); }), "QUERY_ERROR");
  EXPECT_EQ(code_of([&] { alice.invoke(svc.url(), "audit_query", {{"since", "yesterday"}}); }), "QUERY_ERROR");
}

}  // namespace
}  // namespace ildg::catalog
