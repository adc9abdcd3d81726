// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "fixture_project.hpp"
#include "mock_sut.hpp"
#include "testit/codegen.hpp"
#include "testit/error.hpp"
#include "testit/process.hpp"
#include "testit/results.hpp"
#include "testit/vectorgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace testit;
using namespace testit::testing;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && v_.ok) {
      v_.ok = false;
      v_.detail = what;
    }
  }
  void note(const std::string& s) {
    if (v_.ok) v_.detail = s;
  }
  Verdict verdict() const { return v_; }

 private:
  Verdict v_;
};

CapturedRun testit_cli(const FixtureProject& p, std::vector<std::string> args) {
  args.insert(args.begin(), cli_binary().string());
  return run_captured(args, p.root());
}

CampaignDatabase database(const FixtureProject& p) {
  return load_database(p.root() / "report" / kResultsFileName);
}

CampaignDatabase without_timing(CampaignDatabase db) {
  db.startedAt.clear();
  for (auto& r : db.records) r.wallTime = 0;
  return db;
}

FixtureConfig e2e_config() {
  FixtureConfig fc;
  fc.iterations = 50;
  fc.tests[0].parameters = {{"SIZE", 4, 32, 4}};
  return fc;
}

// Kept for the sorting criterion, which reuses real campaign databases.
std::vector<CampaignDatabase> g_databases;

Verdict e2e_random_campaign() {
  Check c;
  auto p = make_fixture(e2e_config());
  auto t0 = std::chrono::steady_clock::now();
  auto run = testit_cli(p, {"run", "--seed", "42"});
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(run.exit_code == 0, "exit code " + std::to_string(run.exit_code) + ": " + run.output);
  auto db = database(p);
  std::size_t passed = std::count_if(db.records.begin(), db.records.end(), [](auto& r) { return r.passed; });
  c.expect(db.records.size() == 50, std::to_string(db.records.size()) + " records");
  c.expect(passed == db.records.size(), std::to_string(passed) + " passed");
  c.expect(db.seed == 42, "seed not recorded");
  std::set<std::int64_t> sizes;
  for (const auto& r : db.records) {
    auto s = r.bindings.get("SIZE");
    c.expect(s && *s >= 4 && *s <= 32 && *s % 4 == 0, "binding outside SIZE range");
    if (s) sizes.insert(*s);
  }
  c.expect(secs < 60.0, "took " + std::to_string(secs) + " s");
  std::ostringstream d;
  d << db.records.size() << " records, " << passed << " passed, " << sizes.size()
    << " distinct SIZE values, " << secs << " s";
  c.note(d.str());
  g_databases.push_back(db);
  return c.verdict();
}

Verdict sweep_cardinality() {
  Check c;
  FixtureConfig fc;
  fc.tests[0].parameters = {{"SIZE", 4, 10, 2}, {"K", 1, 2, 1}};
  auto p = make_fixture(fc);
  auto run = testit_cli(p, {"run", "--sweep", "--seed", "1"});
  c.expect(run.exit_code == 0, run.output);
  auto db = database(p);
  c.expect(db.records.size() == 8, std::to_string(db.records.size()) + " records");
  std::vector<std::string> seen;
  for (const auto& r : db.records) seen.push_back(r.bindings.to_string());
  const std::vector<std::string> expected = {"SIZE=4,K=1", "SIZE=4,K=2", "SIZE=6,K=1", "SIZE=6,K=2",
                                             "SIZE=8,K=1", "SIZE=8,K=2", "SIZE=10,K=1", "SIZE=10,K=2"};
  c.expect(seen == expected, "unexpected sweep order");
  c.expect(run.output.find("8/8 iterations") != std::string::npos, "summary line missing");
  c.note(std::to_string(db.records.size()) + " records covering the 4x2 product");
  return c.verdict();
}

Verdict fault_detection() {
  Check c;
  const std::uint64_t seed = 7;
  FixtureConfig fc;
  fc.tests[0].parameters = {{"SIZE", 16, 128, 8}};
  fc.tests[0].dataType = "uint32_t";
  fc.tests[0].valueRange = "[0, 4294967295]";
  auto p = make_fixture(fc);

  // Brute-force oracle: the mock's own check under trunc8, run over the
  // exact datasets of each sweep point.
  const TestSpec& test = p.config.tests[0];
  auto bindings = plan_sweep(test);
  std::vector<bool> expected;
  std::int64_t threshold = -1;
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    auto inputs = generate_inputs(test, bindings[i], seed, i, 0);
    Sidecar s;
    s.inputs = inputs;
    s.goldens = inputs;
    s.goldens[0].name = "output_matrix_golden";
    bool pass = mock_sut::mock_run(s, 1, mock_sut::FaultMode::kTrunc8)->outcome == 1;
    expected.push_back(pass);
    if (!pass && threshold < 0) threshold = *bindings[i].get("SIZE");
  }

  ScopedEnv fault("MOCK_SUT_FAULT", "trunc8");
  auto run = testit_cli(p, {"run", "--sweep", "--seed", std::to_string(seed)});
  c.expect(run.exit_code == 0, run.output);
  auto db = database(p);
  c.expect(db.records.size() == bindings.size(), std::to_string(db.records.size()) + " records");
  std::size_t fp = 0, fn = 0, failures = 0;
  for (std::size_t i = 0; i < std::min(db.records.size(), bindings.size()); ++i) {
    c.expect(db.records[i].bindings == bindings[i], "record order differs from sweep order");
    if (db.records[i].passed && !expected[i]) ++fn;
    if (!db.records[i].passed && expected[i]) ++fp;
    failures += db.records[i].passed ? 0 : 1;
    // The failure set is exactly the bindings with rows wider than 255 bytes.
    std::int64_t size = *bindings[i].get("SIZE");
    c.expect(expected[i] == (size * 4 <= 255), "oracle disagrees with the 8-bit bound at SIZE=" +
                                                  std::to_string(size));
  }
  c.expect(fp == 0 && fn == 0, std::to_string(fp) + " false positives, " + std::to_string(fn) +
                                   " false negatives");
  c.expect(failures > 0 && failures < bindings.size(), "sweep does not straddle the threshold");
  c.note(std::to_string(bindings.size()) + " bindings, " + std::to_string(failures) +
         " failing from SIZE=" + std::to_string(threshold) + ", 0 false positives, 0 false negatives");
  g_databases.push_back(db);
  return c.verdict();
}

Verdict determinism() {
  Check c;
  FixtureConfig fc = e2e_config();
  fc.iterations = 20;
  FixtureTest second;
  second.appName = "second_app";
  second.dataType = "float";
  second.valueRange = "[-1.5, 2.5]";
  second.dimensions = "[3, \"SIZE\"]";
  second.parameters = {{"SIZE", 1, 9, 1}};
  fc.tests.push_back(second);
  auto a = make_fixture(fc);
  auto b = make_fixture(fc);
  c.expect(testit_cli(a, {"run", "--seed", "123456789"}).exit_code == 0, "first run failed");
  c.expect(testit_cli(b, {"run", "--seed", "123456789"}).exit_code == 0, "second run failed");
  std::string ga = read_file(a.root() / "build" / "generated.log");
  std::string gb = read_file(b.root() / "build" / "generated.log");
  c.expect(!ga.empty() && ga == gb, "generated file streams differ");
  for (const char* app : {"application_name", "second_app"}) {
    for (const char* ext : {".h", ".c", ".json"}) {
      auto rel = std::filesystem::path("apps") / app / (std::string("test_data") + ext);
      c.expect(read_file(a.root() / rel) == read_file(b.root() / rel), rel.string() + " differs");
    }
  }
  auto da = database(a), db = database(b);
  c.expect(without_timing(da) == without_timing(db), "databases differ beyond timing fields");
  c.expect(da.records.size() == 40, std::to_string(da.records.size()) + " records");
  c.note(std::to_string(ga.size()) + " generated bytes over 40 runs identical; databases equal");
  return c.verdict();
}

Verdict fpga_path_equivalence() {
  Check c;
  FixtureConfig sim = e2e_config();
  sim.iterations = 25;
  FixtureConfig fpga = sim;
  fpga.type = "fpga";
  auto ps = make_fixture(sim);
  auto pf = make_fixture(fpga);
  c.expect(testit_cli(ps, {"run", "--seed", "42"}).exit_code == 0, "sim run failed");
  auto fr = testit_cli(pf, {"run", "--seed", "42"});
  c.expect(fr.exit_code == 0, "fpga run failed: " + fr.output);
  auto ds = database(ps), df = database(pf);
  c.expect(ds.records.size() == df.records.size() && !ds.records.empty(), "record counts differ");
  std::size_t equal = 0;
  for (std::size_t i = 0; i < std::min(ds.records.size(), df.records.size()); ++i) {
    const auto& a = ds.records[i];
    const auto& b = df.records[i];
    bool same = a.iteration == b.iteration && a.appName == b.appName && a.bindings == b.bindings &&
                a.tags == b.tags && a.passed == b.passed;
    c.expect(same, "record " + std::to_string(i) + " differs");
    equal += same;
  }
  c.expect(df.targetType == TargetType::kFpga, "fpga database not marked fpga");
  auto log = read_lines(pf.root() / "build" / "make.log");
  c.expect(std::count(log.begin(), log.end(), "sw-fpga app=application_name") == 25,
           "sw-fpga not used per iteration");
  c.note(std::to_string(equal) + "/" + std::to_string(ds.records.size()) +
         " records equal between sim dump and loopback serial");
  return c.verdict();
}

Verdict regex_round_trip() {
  Check c;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint32_t> any;
  std::vector<std::array<std::uint32_t, 3>> triples;
  std::string raw;
  for (int i = 0; i < 1000; ++i) {
    std::array<std::uint32_t, 3> t{any(rng), any(rng), any(rng)};
    if (i % 10 == 0) t[i % 3 == 0 ? 0 : 1] = i % 20 == 0 ? 0u : UINT32_MAX;
    triples.push_back(t);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%u:%u:%u\n", t[0], t[1], t[2]);
    raw += buf;
    c.expect(buf == mock_sut::format_line({t[0], t[1], t[2]}), "mock line format differs");
  }
  auto maps = parse_output(raw, std::string("(\\d+):(\\d+):(\\d+)"), {"TestID", "Cycles", "Outcome"});
  c.expect(maps.size() == triples.size(), std::to_string(maps.size()) + " matches");
  std::size_t exact = 0;
  for (std::size_t i = 0; i < std::min(maps.size(), triples.size()); ++i) {
    bool same = maps[i].size() == 3;
    for (std::size_t k = 0; same && k < 3; ++k) {
      same = std::stoull(maps[i][k].second) == triples[i][k] &&
             maps[i][k].second == std::to_string(triples[i][k]);
    }
    exact += same;
  }
  c.expect(exact == triples.size(), std::to_string(exact) + " exact");
  c.note(std::to_string(exact) + "/1000 triples recovered exactly");
  return c.verdict();
}

struct KeyColumn {
  std::vector<std::string> text;
  std::vector<double> number;
  bool numeric = true;

  int compare(std::size_t a, std::size_t b) const {
    if (numeric) return number[a] < number[b] ? -1 : number[a] > number[b] ? 1 : 0;
    return text[a].compare(text[b]);
  }
};

// Sort values as the report sees them: numeric when every value parses
// with strtod, byte-wise text otherwise.
KeyColumn key_column(const CampaignDatabase& db, const std::string& key) {
  KeyColumn col;
  for (const auto& r : db.records) {
    if (key == "iteration") {
      col.text.push_back(std::to_string(r.iteration));
    } else if (key == "appName") {
      col.text.push_back(r.appName);
    } else if (key == "passed") {
      col.text.push_back(r.passed ? "1" : "0");
    } else if (key == "wallTime") {
      std::ostringstream s;
      s.precision(17);
      s << r.wallTime;
      col.text.push_back(s.str());
    } else {
      const std::string* v = find_tag(r.tags, key);
      col.text.push_back(v ? *v : "");
    }
  }
  for (const auto& t : col.text) {
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || !std::isfinite(v)) col.numeric = false;
    col.number.push_back(v);
  }
  return col;
}

// Independent reference for the report order; ties keep campaign position.
std::vector<std::size_t> reference_order(const CampaignDatabase& db, const std::string& key, bool desc) {
  const KeyColumn col = key_column(db, key);
  auto before = [&](std::size_t a, std::size_t b) {
    int cmp = col.compare(a, b);
    if (desc) cmp = -cmp;
    return cmp < 0 || (cmp == 0 && a < b);
  };
  // Selection sort: quadratic but obviously correct.
  std::vector<std::size_t> left(db.records.size()), out;
  for (std::size_t i = 0; i < left.size(); ++i) left[i] = i;
  while (!left.empty()) {
    auto best = left.begin();
    for (auto it = left.begin(); it != left.end(); ++it) {
      if (before(*it, *best)) best = it;
    }
    out.push_back(*best);
    left.erase(best);
  }
  return out;
}

/// Record indices of the rendered rows, identified by (iteration, appName).
std::vector<std::size_t> rendered_order(const CampaignDatabase& db, const std::string& table) {
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    index[{std::to_string(db.records[i].iteration), db.records[i].appName}] = i;
  }
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);  // header
  std::getline(in, line);  // rule
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < db.records.size() && std::getline(in, line); ++n) {
    std::istringstream cells(line);
    std::string it, app;
    cells >> it >> app;
    auto f = index.find({it, app});
    out.push_back(f == index.end() ? SIZE_MAX : f->second);
  }
  return out;
}

Verdict report_sorting() {
  Check c;
  std::vector<CampaignDatabase> dbs = g_databases;
  // Two tests per iteration, and a tag column mixing numbers and text.
  FixtureConfig fc;
  fc.iterations = 12;
  FixtureTest second;
  second.appName = "b_app";
  second.parameters = {{"SIZE", 1, 3, 1}};
  fc.tests.push_back(second);
  auto p = make_fixture(fc);
  c.expect(testit_cli(p, {"run", "--seed", "11"}).exit_code == 0, "campaign for sorting failed");
  CampaignDatabase mixed = database(p);
  dbs.push_back(mixed);
  for (std::size_t i = 0; i < mixed.records.size(); i += 5) {
    for (auto& [k, v] : mixed.records[i].tags) v = std::string(kNoMatch);
    mixed.records[i].passed = false;
  }
  dbs.push_back(mixed);
  c.expect(dbs.size() >= 4, "missing campaign databases");

  std::size_t checked = 0;
  for (const auto& db : dbs) {
    for (const auto& key : valid_sort_keys(db)) {
      for (bool desc : {false, true}) {
        std::string label = key + (desc ? " descending" : "");
        auto got = rendered_order(db, render_report(db, key, desc));
        auto want = reference_order(db, key, desc);
        auto sorted = got;
        std::sort(sorted.begin(), sorted.end());
        bool perm = sorted.size() == db.records.size();
        for (std::size_t i = 0; perm && i < sorted.size(); ++i) perm = sorted[i] == i;
        c.expect(perm, label + ": rows are not a permutation of the records");
        c.expect(got == want, label + ": order differs from the reference");
        c.expect(got == sort_order(db, key, desc), label + ": render and sort_order disagree");
        ++checked;
      }
      // Descending visits the key values of ascending order in reverse.
      const KeyColumn col = key_column(db, key);
      auto asc = sort_order(db, key, false), desc = sort_order(db, key, true);
      bool reversed = asc.size() == desc.size();
      for (std::size_t i = 0; reversed && i < asc.size(); ++i) {
        reversed = col.compare(desc[i], asc[asc.size() - 1 - i]) == 0;
      }
      c.expect(reversed, key + ": descending is not the reversed ascending sequence");
    }
    auto plain = rendered_order(db, render_report(db, std::nullopt, false));
    std::vector<std::size_t> campaign(db.records.size());
    for (std::size_t i = 0; i < campaign.size(); ++i) campaign[i] = i;
    c.expect(plain == campaign, "no key: rows not in campaign order");
    auto plain_desc = rendered_order(db, render_report(db, std::nullopt, true));
    c.expect(plain_desc == std::vector<std::size_t>(campaign.rbegin(), campaign.rend()),
             "no key, descending: rows not reversed");
  }
  c.note(std::to_string(checked) + " (database, key, direction) orderings match the reference");
  return c.verdict();
}

Verdict crash_persistence() {
  Check c;
  std::string summary;
  for (std::size_t k : {0u, 4u, 9u}) {
    FixtureConfig fc;
    FixtureTest second;
    second.appName = "second_app";
    fc.tests.push_back(second);
    auto p = make_fixture(fc);
    const std::size_t tests = fc.tests.size();
    ScopedEnv kill("MOCK_GOLDEN_KILL_AT", std::to_string(k * tests + 1));
    auto run = testit_cli(p, {"run", "--seed", "3"});
    c.expect(run.exit_code == 2, "k=" + std::to_string(k) + ": exit code " + std::to_string(run.exit_code));
    CampaignDatabase db;
    try {
      db = database(p);
    } catch (const Error& e) {
      c.expect(false, "k=" + std::to_string(k) + ": database unreadable: " + e.what());
      continue;
    }
    c.expect(db.records.size() == k * tests,
             "k=" + std::to_string(k) + ": " + std::to_string(db.records.size()) + " records");
    for (const auto& r : db.records) c.expect(r.iteration < k && r.passed, "unexpected record");
    summary += (summary.empty() ? "" : ", ") + std::string("k=") + std::to_string(k) + " -> " +
               std::to_string(db.records.size());
  }
  c.note("records persisted after plugin kill: " + summary);
  return c.verdict();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"e2e_random_campaign", e2e_random_campaign},
      {"sweep_cardinality", sweep_cardinality},
      {"fault_detection", fault_detection},
      {"determinism", determinism},
      {"fpga_path_equivalence", fpga_path_equivalence},
      {"regex_round_trip", regex_round_trip},
      {"report_sorting", report_sorting},
      {"crash_persistence", crash_persistence},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.ok ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    failed += v.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
