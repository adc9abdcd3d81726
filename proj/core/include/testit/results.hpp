#pragma once

#include "testit/config.hpp"
#include "testit/vectorgen.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace testit {

/// Tag name -> captured text, in outputTags order.
using TagMap = std::vector<std::pair<std::string, std::string>>;

const std::string* find_tag(const TagMap& tags, std::string_view name);

/// Placeholder tag value for a run that printed no result line.
inline constexpr std::string_view kNoMatch = "<none>";

struct RunRecord {
  std::uint64_t iteration = 0;
  std::string appName;
  ParameterBinding bindings;
  TagMap tags;
  bool passed = false;
  double wallTime = 0.0;  // seconds

  bool operator==(const RunRecord&) const = default;
};

enum class CampaignMode { kRandom, kSweep };

std::string_view to_string(CampaignMode mode);

struct CampaignDatabase {
  std::uint64_t seed = 0;
  std::string targetName;
  TargetType targetType = TargetType::kSim;
  std::string startedAt;  // ISO-8601 UTC
  CampaignMode mode = CampaignMode::kRandom;
  std::vector<RunRecord> records;

  bool operator==(const CampaignDatabase&) const = default;
};

/// One TagMap per line where `format` is found, group i bound to tags[i].
std::vector<TagMap> parse_output(std::string_view raw, const std::regex& format,
                                 const std::vector<std::string>& tags);
std::vector<TagMap> parse_output(std::string_view raw, const std::string& format,
                                 const std::vector<std::string>& tags);

/// tags[passTag] == passValue. Throws Error(kMissingTag).
bool judge(const TagMap& tags, std::string_view passTag, std::string_view passValue);

inline constexpr std::string_view kResultsFileName = "testit_results.json";

std::string database_to_json(const CampaignDatabase& db);
/// Throws Error(kProtocol) on schema violations.
CampaignDatabase database_from_json(std::string_view text);

/// Atomically replaces `<reportDir>/testit_results.json`. Creates the
/// directory if needed. Throws Error(kIo).
std::filesystem::path persist(const CampaignDatabase& db, const std::filesystem::path& reportDir);

/// Throws Error(kIo) when absent or unreadable.
CampaignDatabase load_database(const std::filesystem::path& file);

/// Built-in sort keys, accepted in addition to any tag name.
inline constexpr std::string_view kRecordSortKeys[] = {"iteration", "appName", "wallTime", "passed"};

/// Built-in keys followed by every tag name present in `db`.
std::vector<std::string> valid_sort_keys(const CampaignDatabase& db);

/// Row order for a report: a stable sort on `sortKey`, comparing numerically
/// when every value of the key parses as a finite number and
/// lexicographically otherwise. `descending` flips the comparator, so
/// ties keep campaign order either way. No key means campaign order
/// (reversed if descending). Throws Error(kUnknownSortKey).
std::vector<std::size_t> sort_order(const CampaignDatabase& db,
                                    const std::optional<std::string>& sortKey, bool descending);

/// Fixed-width table plus a pass/fail footer line.
std::string render_report(const CampaignDatabase& db, const std::optional<std::string>& sortKey,
                          bool descending);

}  // namespace testit
