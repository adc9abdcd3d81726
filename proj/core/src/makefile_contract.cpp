#include "testit/config.hpp"
#include "testit/error.hpp"

#include <fstream>
#include <set>
#include <string>

namespace testit {

std::vector<std::string> validate_makefile(const std::filesystem::path& projectRoot) {
  const auto path = projectRoot / "Makefile";
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());

  std::set<std::string, std::less<>> declared;
  std::string line;
  while (std::getline(in, line)) {
    // `name:` or `name: prereqs`, but not `name := value`.
    auto colon = line.find(':');
    if (colon == std::string::npos || colon == 0) continue;
    if (colon + 1 < line.size() && line[colon + 1] == '=') continue;
    declared.insert(line.substr(0, colon));
  }

  std::vector<std::string> missing;
  for (std::string_view target : kMakeContractTargets) {
    if (!declared.count(target)) missing.emplace_back(target);
  }
  return missing;
}

}  // namespace testit
