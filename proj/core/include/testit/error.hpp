#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace testit {

enum class ErrorCode {
  // config
  kSyntax,
  kSchema,
  kRegex,
  kArity,
  kUnboundDimension,
  kIo,
  // golden bridge
  kSpawn,
  kHandshake,
  kPluginCrashed,
  kProtocol,
  kShape,
  kUnknownFunction,
  // codegen
  kNameCollision,
  // target driver
  kNonZeroExit,
  kBuildFailed,
  kSerialOpen,
  kMissingOutput,
  kTimeout,
  // results
  kMissingTag,
  kUnknownSortKey,
};

std::string_view to_string(ErrorCode code);

/// Base exception for everything the harness reports. `where()` names the
/// offending config field or pipeline stage when one is known, and
/// `detail()` carries bulky context such as captured make output.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string where = {},
        std::string detail = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string where_;
  std::string message_;
  std::string detail_;
};

}  // namespace testit
