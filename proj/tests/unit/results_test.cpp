#include "test_support.hpp"
#include "testit/error.hpp"
#include "testit/results.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/stat.h>
#include <unistd.h>

using namespace testit;
using testit::testing::read_file;
using testit::testing::TempDir;

namespace {

const std::vector<std::string> kTags = {"TestID", "Cycles", "Outcome"};
const std::string kFormat = "(\\d+):(\\d+):(\\d+)";

RunRecord record(std::uint64_t it, std::string app, std::int64_t size, std::string cycles,
                 bool passed, double wall) {
  return RunRecord{it,
                   std::move(app),
                   {{"SIZE", size}},
                   {{"TestID", "1"}, {"Cycles", std::move(cycles)}, {"Outcome", passed ? "1" : "0"}},
                   passed,
                   wall};
}

CampaignDatabase sample_db() {
  CampaignDatabase db;
  db.seed = 42;
  db.targetName = "verilator";
  db.startedAt = "2026-01-01T00:00:00Z";
  db.records = {record(0, "b", 4, "100", true, 0.5), record(1, "a", 8, "9", false, 0.25),
                record(2, "c", 4, "100", true, 0.75), record(3, "a", 6, "1000", true, 0.125)};
  return db;
}

std::vector<std::uint64_t> iterations(const CampaignDatabase& db, const std::vector<std::size_t>& order) {
  std::vector<std::uint64_t> out;
  for (auto i : order) out.push_back(db.records[i].iteration);
  return out;
}

}  // namespace

TEST(ParseOutput, Examples) {
  auto m = parse_output("3:1520:1", kFormat, kTags);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (TagMap{{"TestID", "3"}, {"Cycles", "1520"}, {"Outcome", "1"}}));
  EXPECT_TRUE(parse_output("nothing here\n\n", kFormat, kTags).empty());
  EXPECT_EQ(parse_output("1:2:3\nnoise\n4:5:6\nmore noise\n7:8:9\n", kFormat, kTags).size(), 3u);
}

TEST(ParseOutput, SearchesWithinLinesAndKeepsOrder) {
  auto m = parse_output("result 2:20:0 ok\r\n1:10:1\n", std::regex(kFormat), kTags);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0][0].second, "2");
  EXPECT_EQ(m[1][0].second, "1");
}

TEST(ParseOutput, UnmatchedOptionalGroupIsEmpty) {
  auto m = parse_output("id=5", "id=(\\d+)(?:,x=(\\d+))?", {"Id", "X"});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (TagMap{{"Id", "5"}, {"X", ""}}));
}

TEST(Judge, Examples) {
  EXPECT_TRUE(judge({{"Outcome", "1"}}, "Outcome", "1"));
  EXPECT_FALSE(judge({{"Outcome", "0"}}, "Outcome", "1"));
  try {
    judge({{"Outcome", "1"}}, "Result", "1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingTag);
  }
}

TEST(Persist, RoundTrip) {
  TempDir d;
  CampaignDatabase db = sample_db();
  for (int i = 0; i < 16; ++i) db.records.push_back(record(4 + i, "x\"y", i, std::to_string(i * 7), i % 3, 0.1 * i));
  db.mode = CampaignMode::kSweep;
  db.targetType = TargetType::kFpga;
  auto path = persist(db, d / "nested" / "report");
  EXPECT_EQ(path, d / "nested" / "report" / "testit_results.json");
  EXPECT_EQ(load_database(path), db);
  EXPECT_EQ(db.records.size(), 20u);
}

TEST(Persist, EmptyRecords) {
  TempDir d;
  CampaignDatabase db;
  db.seed = UINT64_MAX;
  auto path = persist(db, d.path());
  auto j = nlohmann::json::parse(read_file(path));
  EXPECT_TRUE(j["records"].is_array());
  EXPECT_TRUE(j["records"].empty());
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), UINT64_MAX);
  EXPECT_EQ(load_database(path), db);
}

TEST(Persist, SchemaFieldNames) {
  auto j = nlohmann::json::parse(database_to_json(sample_db()));
  for (const char* k : {"seed", "targetName", "targetType", "startedAt", "mode", "records"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  for (const char* k : {"iteration", "appName", "bindings", "tags", "passed", "wallTime"}) {
    EXPECT_TRUE(j["records"][0].contains(k)) << k;
  }
  EXPECT_EQ(j["targetType"], "sim");
  EXPECT_EQ(j["mode"], "random");
}

TEST(Persist, ReadOnlyDirIsIoError) {
  if (geteuid() == 0) GTEST_SKIP() << "permission bits do not bind root";
  TempDir d;
  chmod(d.path().c_str(), 0500);
  try {
    persist(sample_db(), d.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(Persist, TargetIsAFileIsIoError) {
  TempDir d;
  testit::testing::write_file(d / "file", "x");
  EXPECT_THROW(persist(sample_db(), d / "file"), Error);
}

TEST(LoadDatabase, Errors) {
  TempDir d;
  EXPECT_THROW(load_database(d / "absent.json"), Error);
  EXPECT_THROW(database_from_json("{\"seed\": 1}"), Error);
  EXPECT_THROW(database_from_json("[1,2"), Error);
}

TEST(SortOrder, NumericAwareAndStable) {
  CampaignDatabase db = sample_db();
  // Cycles 100, 9, 100, 1000: numeric, ties keep campaign order.
  EXPECT_EQ(iterations(db, sort_order(db, "Cycles", false)), (std::vector<std::uint64_t>{1, 0, 2, 3}));
  EXPECT_EQ(iterations(db, sort_order(db, "Cycles", true)), (std::vector<std::uint64_t>{3, 0, 2, 1}));
  EXPECT_EQ(iterations(db, sort_order(db, "appName", false)), (std::vector<std::uint64_t>{1, 3, 0, 2}));
  EXPECT_EQ(iterations(db, sort_order(db, "wallTime", false)), (std::vector<std::uint64_t>{3, 1, 0, 2}));
  EXPECT_EQ(iterations(db, sort_order(db, "passed", true)), (std::vector<std::uint64_t>{0, 2, 3, 1}));
  EXPECT_EQ(iterations(db, sort_order(db, std::nullopt, false)), (std::vector<std::uint64_t>{0, 1, 2, 3}));
  EXPECT_EQ(iterations(db, sort_order(db, std::nullopt, true)), (std::vector<std::uint64_t>{3, 2, 1, 0}));
}

TEST(SortOrder, LexicographicFallback) {
  CampaignDatabase db = sample_db();
  db.records[1].tags[1].second = "n/a";
  // "100" < "1000" < "n/a" as strings.
  EXPECT_EQ(iterations(db, sort_order(db, "Cycles", false)), (std::vector<std::uint64_t>{0, 2, 3, 1}));
}

TEST(SortOrder, UnknownKey) {
  try {
    sort_order(sample_db(), "Bogus", false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSortKey);
    EXPECT_NE(e.message().find("Cycles"), std::string::npos);
    EXPECT_NE(e.message().find("wallTime"), std::string::npos);
  }
  EXPECT_EQ(valid_sort_keys(sample_db()),
            (std::vector<std::string>{"iteration", "appName", "wallTime", "passed", "TestID", "Cycles",
                                      "Outcome"}));
}

TEST(RenderReport, Table) {
  std::string text = render_report(sample_db(), "Cycles", true);
  EXPECT_NE(text.find("iteration"), std::string::npos);
  EXPECT_NE(text.find("bindings"), std::string::npos);
  EXPECT_NE(text.find("Cycles"), std::string::npos);
  EXPECT_NE(text.find("SIZE=8"), std::string::npos);
  EXPECT_NE(text.find("FAIL"), std::string::npos);
  EXPECT_NE(text.find("0.125"), std::string::npos);
  EXPECT_NE(text.find("4 records, 3 passed, 1 failed"), std::string::npos);
  EXPECT_LT(text.find("1000"), text.find(" 9 "));
  EXPECT_THROW(render_report(sample_db(), "Bogus", false), Error);
}
