#pragma once

#include <string_view>

namespace testit {

/// Debug chatter goes to stderr when TESTIT_LOG=debug.
bool debug_enabled();
void log_debug(std::string_view message);

}  // namespace testit
