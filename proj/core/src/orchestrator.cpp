#include "testit/orchestrator.hpp"

#include "testit/codegen.hpp"
#include "testit/vectorgen.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

namespace testit {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

fs::path resolve(const fs::path& root, const std::string& p) {
  fs::path path(p);
  return path.is_relative() ? root / path : path;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

Campaign::Campaign(const TestConfig& config, CampaignOptions options)
    : config_(config), options_(std::move(options)), driver_(config, options_.projectRoot) {
  for (const TestSpec& t : config_.tests) {
    formats_.emplace_back(t.outputFormat, std::regex::ECMAScript);
  }
}

Campaign::~Campaign() = default;

fs::path Campaign::report_dir() const { return resolve(options_.projectRoot, config_.report.dir); }

void Campaign::start() {
  plugin_.emplace(PluginSession::spawn(config_.target.goldenPlugin, options_.projectRoot,
                                       options_.pluginTimeouts));
  driver_.build_model(options_.nobuild);
  if (config_.target.type == TargetType::kFpga) serial_.emplace(driver_.prepare_fpga(options_.devDir));
}

std::vector<RunRecord> Campaign::iteration_step(std::size_t testIndex,
                                                const ParameterBinding& binding,
                                                std::uint64_t iteration) {
  const TestSpec& test = config_.tests.at(testIndex);
  const std::string where = "iteration " + std::to_string(iteration) + ", test " + test.appName;
  const char* stage = "generate";
  try {
    auto inputs = generate_inputs(test, binding, options_.seed, iteration, testIndex);

    stage = "golden";
    if (!plugin_) throw Error(ErrorCode::kPluginCrashed, "no plugin session", "golden plugin");
    GoldenRequest req{test.goldenResultFunction, binding, inputs};
    GoldenResponse golden = plugin_->compute(req, test.outputDataset);

    stage = "codegen";
    write_pair(render_pair(test, binding, inputs, golden.outputs), resolve(options_.projectRoot, test.dir));

    stage = "compile";
    driver_.compile_app(test);

    stage = "run";
    const auto t0 = Clock::now();
    std::string raw;
    if (config_.target.type == TargetType::kSim) {
      raw = driver_.run_iteration_sim(test);
    } else {
      if (!serial_) throw Error(ErrorCode::kSerialOpen, "serial link not open", "serial");
      auto timeout = std::chrono::milliseconds(static_cast<long long>(config_.target.serialTimeout * 1000));
      raw = join_lines(run_iteration_fpga(*serial_, 1, formats_[testIndex], timeout));
    }
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();

    stage = "parse";
    std::vector<RunRecord> records;
    auto maps = parse_output(raw, formats_[testIndex], test.outputTags);
    if (maps.empty()) {
      RunRecord r{iteration, test.appName, binding, {}, false, wall};
      for (const auto& tag : test.outputTags) r.tags.emplace_back(tag, std::string(kNoMatch));
      records.push_back(std::move(r));
    }
    for (auto& m : maps) {
      bool passed = judge(m, test.passTag, test.passValue);
      records.push_back(RunRecord{iteration, test.appName, binding, std::move(m), passed, wall});
    }
    return records;
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.message(), where, e.detail());
  }
}

CampaignDatabase Campaign::run() {
  auto missing = validate_makefile(options_.projectRoot);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::kSchema, "Makefile does not declare: " + list, "Makefile");
  }

  CampaignDatabase db;
  db.seed = options_.seed;
  db.targetName = config_.target.name;
  db.targetType = config_.target.type;
  db.startedAt = utc_timestamp();
  db.mode = options_.sweep ? CampaignMode::kSweep : CampaignMode::kRandom;

  // schedule[i][t]: binding of test t at iteration i, if that test runs.
  std::vector<std::vector<std::optional<ParameterBinding>>> schedule;
  if (options_.sweep) {
    auto per_test = plan_sweep(config_);
    std::size_t n = 0;
    for (const auto& v : per_test) n = std::max(n, v.size());
    schedule.assign(n, std::vector<std::optional<ParameterBinding>>(config_.tests.size()));
    for (std::size_t t = 0; t < per_test.size(); ++t) {
      for (std::size_t i = 0; i < per_test[t].size(); ++i) schedule[i][t] = per_test[t][i];
    }
  } else {
    for (auto& row : plan_random(config_, options_.seed)) {
      schedule.emplace_back(row.begin(), row.end());
    }
  }

  try {
    start();
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      for (std::size_t t = 0; t < config_.tests.size(); ++t) {
        if (!schedule[i][t]) continue;
        auto records = iteration_step(t, *schedule[i][t], i);
        db.records.insert(db.records.end(), records.begin(), records.end());
        if (options_.onProgress) {
          options_.onProgress(CampaignProgress{i, schedule.size(), t, &config_.tests[t], &records});
        }
      }
    }
  } catch (const Error& e) {
    plugin_.reset();
    try {
      persist(db, report_dir());
    } catch (const Error&) {
      // The original failure is the one worth reporting.
    }
    throw CampaignAborted(e, std::move(db));
  }
  plugin_.reset();
  persist(db, report_dir());
  return db;
}

CampaignDatabase run_campaign(const TestConfig& config, const CampaignOptions& options) {
  return Campaign(config, options).run();
}

}  // namespace testit
