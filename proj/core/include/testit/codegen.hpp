#pragma once

#include "testit/config.hpp"
#include "testit/vectorgen.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace testit {

/// Generated dataset files for one test run.
///
/// The header holds an include guard `<BASENAME>_H_`, one `#define` per
/// parameter, `<name>_DIM<i>` extents and an `extern` declaration per
/// dataset. The source defines each dataset as a flat row-major
/// `const <type> <name>[N]`. Golden datasets carry a `_golden` suffix.
/// The JSON sidecar mirrors parameters and datasets for non-C consumers.
struct GeneratedPair {
  std::string baseName;
  std::string headerText;
  std::string sourceText;
  std::string sidecarText;
};

inline constexpr std::string_view kGoldenSuffix = "_golden";

/// `goldens` are in OutputDatasetSpec order, named as in the config.
/// Throws Error(kNameCollision) when two emitted C identifiers coincide.
GeneratedPair render_pair(const TestSpec& test, const ParameterBinding& binding,
                          const std::vector<MaterializedDataset>& inputs,
                          const std::vector<MaterializedDataset>& goldens);

/// Writes `<baseName>.h`, `.c` and `.json` into `appDir` (IoError on failure).
std::vector<std::filesystem::path> write_pair(const GeneratedPair& pair,
                                              const std::filesystem::path& appDir);

/// C literal for one element, e.g. `200`, `-3`, `0.5f`.
std::string c_literal(DataType type, double value);

/// `foo-bar.data` -> `FOO_BAR_DATA_H_`.
std::string include_guard(const std::string& baseName);

struct Sidecar {
  ParameterBinding parameters;
  std::vector<MaterializedDataset> inputs;
  std::vector<MaterializedDataset> goldens;  // names carry the _golden suffix
};

/// Throws Error(kProtocol) on a malformed sidecar.
Sidecar parse_sidecar(std::string_view text);

}  // namespace testit
