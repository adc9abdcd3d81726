#pragma once

#include "testit/config.hpp"
#include "testit/process.hpp"
#include "testit/vectorgen.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace testit {

inline constexpr std::string_view kGoldenBanner = "testit-golden-protocol 1";

struct GoldenRequest {
  std::string function;
  ParameterBinding parameters;
  std::vector<MaterializedDataset> inputs;
};

struct GoldenResponse {
  std::vector<MaterializedDataset> outputs;  // in OutputDatasetSpec order
};

/// One JSON line, without the trailing newline.
std::string encode_request(const GoldenRequest& request);

/// Parses and validates one response line against the test's output
/// specs. Entries are matched by `name`, or by position when the name is
/// omitted; a missing `dataType` defaults to the declared output type.
///
/// Throws ProtocolError, ShapeError, or UnknownFunction (when the plugin
/// answers `{"error": "unknown function: ..."}`).
GoldenResponse decode_response(std::string_view line, const std::vector<OutputDatasetSpec>& specs,
                               std::string_view function);

struct PluginTimeouts {
  std::chrono::milliseconds handshake{10'000};
  std::chrono::milliseconds request{60'000};
};

/// A running golden-model plugin speaking the line protocol: a version
/// banner, then strictly alternating request/response lines.
class PluginSession {
 public:
  using Timeouts = PluginTimeouts;

  /// Spawns `command` in `cwd` and waits for the banner.
  /// Throws SpawnError or HandshakeError.
  static PluginSession spawn(const std::vector<std::string>& command,
                             const std::filesystem::path& cwd = {},
                             PluginTimeouts timeouts = {});

  /// Throws PluginCrashed (exit, closed pipe, or request timeout) plus the
  /// decode_response() errors.
  GoldenResponse compute(const GoldenRequest& request,
                         const std::vector<OutputDatasetSpec>& specs);

  int protocol_version() const { return 1; }
  std::size_t requests_served() const { return served_; }
  pid_t pid() const { return proc_.pid(); }

 private:
  PluginSession(Subprocess proc, Timeouts timeouts)
      : proc_(std::move(proc)), timeouts_(timeouts) {}

  [[noreturn]] void crashed(const std::string& what);

  Subprocess proc_;
  Timeouts timeouts_;
  std::size_t served_ = 0;
};

/// JSON form of a dataset, shared by the protocol and the codegen sidecar.
nlohmann::ordered_json dataset_to_json(const MaterializedDataset& d);

}  // namespace testit
