#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace testit::hjson {

/// Parses an Hjson document into an insertion-ordered JSON value.
///
/// Supported: `#`, `//` and `/* */` comments; unquoted keys; quoteless
/// string values running to end of line; single- and double-quoted strings;
/// `'''` multiline strings; optional commas; and a root object without
/// braces (the form `config.test` files use). Duplicate keys are rejected.
///
/// Throws testit::Error(kSyntax) with a "line L, column C" location.
nlohmann::ordered_json parse(std::string_view text);

/// Emits `value` as a quoted Hjson/JSON string literal.
std::string quote(std::string_view value);

}  // namespace testit::hjson
