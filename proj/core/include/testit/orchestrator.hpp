#pragma once

#include "testit/config.hpp"
#include "testit/error.hpp"
#include "testit/golden_bridge.hpp"
#include "testit/results.hpp"
#include "testit/serial.hpp"
#include "testit/target_driver.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <regex>
#include <vector>

namespace testit {

struct CampaignProgress {
  std::uint64_t iteration = 0;
  std::uint64_t totalIterations = 0;
  std::size_t testIndex = 0;
  const TestSpec* test = nullptr;
  const std::vector<RunRecord>* records = nullptr;  // produced by this step
};

struct CampaignOptions {
  bool nobuild = false;
  bool sweep = false;
  std::uint64_t seed = 0;
  /// Directory holding the Makefile; relative config paths resolve here.
  std::filesystem::path projectRoot = ".";
  /// Where usbPort indices are enumerated.
  std::filesystem::path devDir = "/dev";
  PluginSession::Timeouts pluginTimeouts{};
  std::function<void(const CampaignProgress&)> onProgress;
};

/// An infrastructure failure that stopped the campaign. The records
/// gathered up to that point have already been persisted.
class CampaignAborted : public Error {
 public:
  CampaignAborted(const Error& cause, CampaignDatabase db)
      : Error(cause.code(), cause.message(), cause.where(), cause.detail()), db_(std::move(db)) {}
  const CampaignDatabase& database() const { return db_; }

 private:
  CampaignDatabase db_;
};

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utc_timestamp();

/// One campaign over a validated config:
/// validate -> build -> (load) -> per iteration and test
/// {plan, generate, golden, codegen, compile, run, parse, record} -> persist.
class Campaign {
 public:
  Campaign(const TestConfig& config, CampaignOptions options);
  ~Campaign();

  /// Runs everything and persists the database to the report dir.
  /// Throws Error(kSchema) when the Makefile contract is incomplete, and
  /// CampaignAborted for failures once the campaign has started.
  CampaignDatabase run();

  /// One test of one iteration. Needs the plugin (and serial link for
  /// FPGA targets) that run() sets up; exposed for fine-grained tests via
  /// start().
  std::vector<RunRecord> iteration_step(std::size_t testIndex, const ParameterBinding& binding,
                                        std::uint64_t iteration);

  /// Spawns the plugin, builds and loads the model. run() calls this.
  void start();

  const TargetDriver& driver() const { return driver_; }
  std::filesystem::path report_dir() const;

 private:
  const TestConfig& config_;
  CampaignOptions options_;
  TargetDriver driver_;
  std::vector<std::regex> formats_;
  std::optional<PluginSession> plugin_;
  std::optional<SerialSession> serial_;
};

/// Convenience wrapper: Campaign(config, options).run().
CampaignDatabase run_campaign(const TestConfig& config, const CampaignOptions& options);

}  // namespace testit
