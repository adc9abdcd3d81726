#include "testit/target_driver.hpp"

#include "testit/log.hpp"
#include "testit/process.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace testit {

namespace fs = std::filesystem;

MakeInvocation invoke_make(const fs::path& projectRoot, std::string_view target,
                           std::optional<std::string> argKey,
                           std::optional<std::string> argValue) {
  if (std::find(std::begin(kMakeContractTargets), std::end(kMakeContractTargets), target) ==
      std::end(kMakeContractTargets)) {
    throw Error(ErrorCode::kSchema, "'" + std::string(target) + "' is not a contract target", "make");
  }
  if (argKey.has_value() != argValue.has_value()) {
    throw Error(ErrorCode::kSchema, "argKey and argValue go together", "make");
  }

  MakeInvocation inv;
  inv.target = std::string(target);
  inv.argKey = std::move(argKey);
  inv.argValue = std::move(argValue);
  inv.workdir = projectRoot;

  std::vector<std::string> argv{"make", inv.target};
  if (inv.argKey) argv.push_back(*inv.argKey + "=" + *inv.argValue);
  log_debug("make: " + inv.target + (inv.argKey ? " " + argv.back() : std::string()));
  try {
    CapturedRun run = run_captured(argv, projectRoot);
    inv.exitCode = run.exit_code;
    inv.capturedOutput = std::move(run.output);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIo, "cannot run make: " + e.message(), projectRoot.string());
  }
  return inv;
}

const MakeInvocation& check_ok(const MakeInvocation& inv) {
  if (inv.exitCode != 0) {
    std::string cmd = "make " + inv.target + (inv.argKey ? " " + *inv.argKey + "=" + *inv.argValue : "");
    throw Error(ErrorCode::kNonZeroExit,
                "`" + cmd + "` exited with status " + std::to_string(inv.exitCode) + "\n" +
                    inv.capturedOutput,
                inv.target, inv.capturedOutput);
  }
  return inv;
}

std::vector<std::string> run_iteration_fpga(SerialSession& session, std::size_t expectedMatches,
                                            const std::regex& pattern,
                                            std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::vector<std::string> matched;
  std::string line;
  while (matched.size() < expectedMatches) {
    switch (session.read_line(line, deadline)) {
      case LineReader::Status::kLine:
        if (std::regex_search(line, pattern)) {
          matched.push_back(line);
        } else {
          log_debug("serial: dropped '" + line + "'");
        }
        break;
      case LineReader::Status::kEof:
      case LineReader::Status::kTimeout:
        throw SerialTimeout("saw " + std::to_string(matched.size()) + " of " +
                                std::to_string(expectedMatches) + " result lines within " +
                                std::to_string(timeout.count()) + " ms on " + session.device(),
                            std::move(matched));
    }
  }
  return matched;
}

TargetDriver::TargetDriver(const TestConfig& config, fs::path projectRoot)
    : config_(config), root_(std::move(projectRoot)) {}

MakeInvocation& TargetDriver::run(std::string_view target, std::optional<std::string> key,
                                  std::optional<std::string> value) {
  invocations_.push_back(invoke_make(root_, target, std::move(key), std::move(value)));
  return invocations_.back();
}

void TargetDriver::run_or_build_failed(std::string_view target, std::optional<std::string> key,
                                       std::optional<std::string> value) {
  try {
    check_ok(run(target, std::move(key), std::move(value)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonZeroExit) throw;
    throw Error(ErrorCode::kBuildFailed, e.message(), std::string(target), e.detail());
  }
}

void TargetDriver::build_model(bool skipBuild) {
  if (skipBuild) return;
  if (config_.target.type == TargetType::kSim) {
    run_or_build_failed("sim-build", "tool", config_.target.name);
  } else {
    run_or_build_failed("fpga-build", "target", config_.target.name);
  }
}

SerialSession TargetDriver::prepare_fpga(const fs::path& dev_dir) {
  run_or_build_failed("fpga-load", "target", config_.target.name);
  run_or_build_failed("gdb-setup", std::nullopt, std::nullopt);
  run_or_build_failed("deb-setup", std::nullopt, std::nullopt);
  return open_serial(config_.target.portPath, config_.target.usbPort,
                     static_cast<long>(config_.target.baudrate.value_or(9600)), root_, dev_dir);
}

void TargetDriver::compile_app(const TestSpec& test) {
  const char* target = config_.target.type == TargetType::kSim ? "sw-sim" : "sw-fpga";
  run_or_build_failed(target, "app", test.appName);
}

fs::path TargetDriver::output_file() const {
  fs::path p = config_.target.outputFile.value_or("");
  return p.is_relative() ? root_ / p : p;
}

std::string TargetDriver::run_iteration_sim(const TestSpec&) {
  const fs::path out = output_file();
  std::error_code ec;
  fs::remove(out, ec);
  check_ok(run("sim-run", "tool", config_.target.name));
  std::ifstream in(out, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingOutput, "sim-run did not produce " + out.string(), "sim-run");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace testit
