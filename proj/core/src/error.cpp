#include "testit/error.hpp"

namespace testit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kRegex: return "RegexError";
    case ErrorCode::kArity: return "ArityError";
    case ErrorCode::kUnboundDimension: return "UnboundDimension";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kSpawn: return "SpawnError";
    case ErrorCode::kHandshake: return "HandshakeError";
    case ErrorCode::kPluginCrashed: return "PluginCrashed";
    case ErrorCode::kProtocol: return "ProtocolError";
    case ErrorCode::kShape: return "ShapeError";
    case ErrorCode::kUnknownFunction: return "UnknownFunction";
    case ErrorCode::kNameCollision: return "NameCollision";
    case ErrorCode::kNonZeroExit: return "NonZeroExit";
    case ErrorCode::kBuildFailed: return "BuildFailed";
    case ErrorCode::kSerialOpen: return "SerialOpenError";
    case ErrorCode::kMissingOutput: return "MissingOutput";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kMissingTag: return "MissingTag";
    case ErrorCode::kUnknownSortKey: return "UnknownSortKey";
  }
  return "Error";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::string& where) {
  std::string out(to_string(code));
  if (!where.empty()) out += " at " + where;
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string where,
             std::string detail)
    : std::runtime_error(compose(code, message, where)),
      code_(code),
      where_(std::move(where)),
      message_(std::move(message)),
      detail_(std::move(detail)) {}

}  // namespace testit
