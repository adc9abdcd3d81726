#include "testit/log.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>

namespace testit {

bool debug_enabled() {
  static const bool enabled = [] {
    const char* v = std::getenv("TESTIT_LOG");
    return v != nullptr && std::strcmp(v, "debug") == 0;
  }();
  return enabled;
}

void log_debug(std::string_view message) {
  if (debug_enabled()) std::cerr << "[testit] " << message << '\n';
}

}  // namespace testit
