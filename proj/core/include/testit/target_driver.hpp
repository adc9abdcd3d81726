#pragma once

#include "testit/config.hpp"
#include "testit/error.hpp"
#include "testit/serial.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace testit {

struct MakeInvocation {
  std::string target;
  std::optional<std::string> argKey;  // app, tool or target
  std::optional<std::string> argValue;
  std::filesystem::path workdir;
  int exitCode = 0;
  std::string capturedOutput;
};

/// Runs `make <target> [<argKey>=<argValue>]` in `projectRoot`. Only the
/// eight contract targets are accepted. Returns the invocation even when
/// make fails; check_ok() turns a failure into Error(kNonZeroExit).
MakeInvocation invoke_make(const std::filesystem::path& projectRoot, std::string_view target,
                           std::optional<std::string> argKey = {},
                           std::optional<std::string> argValue = {});

/// Throws Error(kNonZeroExit) carrying the captured output.
const MakeInvocation& check_ok(const MakeInvocation& inv);

/// Raised when the serial link stays quiet; keeps the lines seen so far.
class SerialTimeout : public Error {
 public:
  SerialTimeout(std::string message, std::vector<std::string> lines)
      : Error(ErrorCode::kTimeout, std::move(message), "serial"), lines_(std::move(lines)) {}
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

/// Reads lines until `expectedMatches` lines match `pattern` (regex_search)
/// and returns them in arrival order; other lines are dropped.
std::vector<std::string> run_iteration_fpga(SerialSession& session, std::size_t expectedMatches,
                                            const std::regex& pattern,
                                            std::chrono::milliseconds timeout);

/// Drives one project's Makefile contract for a campaign.
class TargetDriver {
 public:
  TargetDriver(const TestConfig& config, std::filesystem::path projectRoot);

  /// sim-build / fpga-build with the target name, unless `skipBuild`.
  /// Throws Error(kBuildFailed).
  void build_model(bool skipBuild);

  /// fpga-load, gdb-setup, deb-setup, then opens the serial link.
  /// Throws Error(kBuildFailed) or Error(kSerialOpen).
  SerialSession prepare_fpga(const std::filesystem::path& dev_dir = "/dev");

  /// sw-sim or sw-fpga for the test's app. Throws Error(kBuildFailed).
  void compile_app(const TestSpec& test);

  /// Removes outputFile, runs sim-run, and returns the dump. An absent
  /// dump is Error(kMissingOutput); an empty one is returned as "".
  std::string run_iteration_sim(const TestSpec& test);

  const std::vector<MakeInvocation>& invocations() const { return invocations_; }
  std::filesystem::path output_file() const;

 private:
  MakeInvocation& run(std::string_view target, std::optional<std::string> key,
                      std::optional<std::string> value);
  void run_or_build_failed(std::string_view target, std::optional<std::string> key,
                           std::optional<std::string> value);

  const TestConfig& config_;
  std::filesystem::path root_;
  std::vector<MakeInvocation> invocations_;
};

}  // namespace testit
