#pragma once

#include "testit/datatype.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace testit {

enum class TargetType { kSim, kFpga };

std::string_view to_string(TargetType type);

struct TargetSpec {
  std::string name;  // forwarded as the tool=/target= make argument
  TargetType type = TargetType::kSim;
  std::optional<std::int64_t> usbPort;
  std::optional<std::string> portPath;  // takes precedence over usbPort
  std::optional<std::int64_t> baudrate;
  std::int64_t iterations = 1;
  std::optional<std::string> outputFile;
  std::vector<std::string> goldenPlugin;  // argv of the golden-model plugin
  double serialTimeout = 120.0;           // seconds per iteration and test

  bool operator==(const TargetSpec&) const = default;
};

struct ReportSpec {
  std::string dir;

  bool operator==(const ReportSpec&) const = default;
};

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;

  bool operator==(const IntRange&) const = default;
};

struct ParameterSpec {
  std::string name;
  std::variant<std::int64_t, IntRange> value;
  std::int64_t step = 1;

  bool is_range() const { return std::holds_alternative<IntRange>(value); }
  bool operator==(const ParameterSpec&) const = default;
};

/// Either a literal extent or the name of a parameter.
using Dimension = std::variant<std::int64_t, std::string>;

struct InputDatasetSpec {
  std::string name;
  DataType dataType = DataType::kUint8;
  double lo = 0;
  double hi = 0;
  std::vector<Dimension> dimensions;

  bool operator==(const InputDatasetSpec&) const = default;
};

struct OutputDatasetSpec {
  std::string name;
  DataType dataType = DataType::kUint8;

  bool operator==(const OutputDatasetSpec&) const = default;
};

struct TestSpec {
  std::string appName;
  std::string dir;
  std::string genFilesName;
  std::string outputFormat;
  std::vector<std::string> outputTags;
  std::vector<ParameterSpec> parameters;
  std::vector<InputDatasetSpec> inputDataset;
  std::vector<OutputDatasetSpec> outputDataset;
  std::string goldenResultFunction;
  std::string passTag = "Outcome";
  std::string passValue = "1";

  const ParameterSpec* find_parameter(std::string_view name) const;
  bool operator==(const TestSpec&) const = default;
};

struct TestConfig {
  TargetSpec target;
  ReportSpec report;
  std::vector<TestSpec> tests;

  bool operator==(const TestConfig&) const = default;
};

/// Parses and validates a `config.test` document. Errors carry the path of
/// the offending field, e.g. `test[0].outputFormat`.
TestConfig parse_config(std::string_view text);

/// Reads and parses a config file (IoError when unreadable).
TestConfig load_config(const std::filesystem::path& path);

/// Emits `config` as Hjson that parse_config() maps back to an equal value.
std::string render_config(const TestConfig& config);

/// Number of capture groups in an ECMAScript regular expression.
/// Throws Error(kRegex) if it does not compile.
std::size_t capture_group_count(const std::string& pattern);

inline constexpr std::string_view kMakeContractTargets[] = {
    "sw-sim",     "sw-fpga",   "sim-build", "sim-run",
    "fpga-build", "fpga-load", "gdb-setup", "deb-setup"};

/// Contract targets not declared in `<projectRoot>/Makefile`, in contract
/// order. A target counts as declared when some line starts with `<name>:`.
std::vector<std::string> validate_makefile(const std::filesystem::path& projectRoot);

inline constexpr std::string_view kConfigFileName = "config.test";
inline constexpr std::string_view kGoldenTemplateName = "testit_golden.py";

/// Commented config template, parseable as-is.
std::string config_template();
/// Golden-model plugin script template speaking the line protocol.
std::string golden_template();

/// Writes the templates into `dir`, skipping files that already exist
/// unless `overwrite`. Returns the paths actually written.
std::vector<std::filesystem::path> write_templates(const std::filesystem::path& dir,
                                                   bool overwrite);

}  // namespace testit
