#pragma once

#include "testit/codegen.hpp"
#include "testit/vectorgen.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace testit::mock_sut {

/// Injected fault, selected through MOCK_SUT_FAULT.
enum class FaultMode {
  kNone,
  kTrunc8,     // row increment of the copy walk held in 8 bits
  kStuckFail,  // always report failure
  kSilent,     // print nothing
};

std::optional<FaultMode> parse_fault(std::string_view name);
std::string_view to_string(FaultMode mode);

/// Reads MOCK_SUT_FAULT; unset means kNone. Throws std::invalid_argument
/// for an unknown value.
FaultMode fault_from_env();

/// Bytes between consecutive rows (leading dimension) of `d`.
std::size_t row_increment_bytes(const MaterializedDataset& d);

/// Identity transform of `d` computed by walking rows with a byte offset
/// that advances by row_increment_bytes(); under kTrunc8 the increment is
/// stored in a uint8_t first.
std::vector<double> walk_copy(const MaterializedDataset& d, FaultMode fault);

struct MockResult {
  std::uint32_t testId = 0;
  std::uint32_t pseudoCycles = 0;  // elementCount * 3 + testId
  std::uint32_t outcome = 0;       // 1 iff every golden matches its walked input
};

/// The application's self-check over one sidecar; nullopt under kSilent.
std::optional<MockResult> mock_run(const Sidecar& sidecar, std::uint32_t testId, FaultMode fault);

/// `<testID>:<pseudoCycles>:<outcome>\n`
std::string format_line(const MockResult& r);

struct FixtureApp {
  std::string name;
  std::uint32_t testId = 0;
};

struct FixtureOptions {
  std::filesystem::path mockSutBinary;
  std::string genFilesName = "test_data";
  std::string outputFile = "sim/dump.txt";  // relative to the project root
  std::string serialDevice;                 // FIFO the sw-fpga run writes to
  std::vector<FixtureApp> apps{{"application_name", 1}};
};

/// Writes a project whose Makefile implements all eight contract targets
/// on top of the mock binary, plus one `apps/<name>` directory per app.
/// Every make invocation is appended to `build/make.log`; sw-sim/sw-fpga
/// append the generated files to `build/generated.log`. Setting
/// MOCK_FAIL_TARGET=<target> (and optionally MOCK_FAIL_CODE) in the
/// environment makes that target fail.
void write_fixture_project(const std::filesystem::path& dir, const FixtureOptions& options);

/// The Makefile text write_fixture_project() emits.
std::string fixture_makefile(const FixtureOptions& options);

}  // namespace testit::mock_sut
