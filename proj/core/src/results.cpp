#include "testit/results.hpp"

#include "testit/error.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <system_error>

namespace testit {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const std::string* find_tag(const TagMap& tags, std::string_view name) {
  for (const auto& [k, v] : tags) {
    if (k == name) return &v;
  }
  return nullptr;
}

std::string_view to_string(CampaignMode mode) {
  return mode == CampaignMode::kSweep ? "sweep" : "random";
}

std::vector<TagMap> parse_output(std::string_view raw, const std::regex& format,
                                 const std::vector<std::string>& tags) {
  std::vector<TagMap> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t nl = raw.find('\n', start);
    std::string_view line = raw.substr(start, nl == std::string_view::npos ? raw.size() - start : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::match_results<std::string_view::const_iterator> m;
    if (!line.empty() && std::regex_search(line.begin(), line.end(), m, format)) {
      TagMap map;
      for (std::size_t i = 0; i < tags.size(); ++i) {
        map.emplace_back(tags[i], i + 1 < m.size() ? m[i + 1].str() : std::string());
      }
      out.push_back(std::move(map));
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

std::vector<TagMap> parse_output(std::string_view raw, const std::string& format,
                                 const std::vector<std::string>& tags) {
  try {
    return parse_output(raw, std::regex(format, std::regex::ECMAScript), tags);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kRegex, e.what(), "outputFormat");
  }
}

bool judge(const TagMap& tags, std::string_view passTag, std::string_view passValue) {
  const std::string* v = find_tag(tags, passTag);
  if (v == nullptr) throw Error(ErrorCode::kMissingTag, "no tag '" + std::string(passTag) + "'", "judge");
  return *v == passValue;
}

std::string database_to_json(const CampaignDatabase& db) {
  Json records = Json::array();
  for (const RunRecord& r : db.records) {
    Json bindings = Json::object();
    for (const auto& [k, v] : r.bindings.entries()) bindings[k] = v;
    Json tags = Json::object();
    for (const auto& [k, v] : r.tags) tags[k] = v;
    records.push_back(Json{{"iteration", r.iteration},
                           {"appName", r.appName},
                           {"bindings", std::move(bindings)},
                           {"tags", std::move(tags)},
                           {"passed", r.passed},
                           {"wallTime", r.wallTime}});
  }
  Json j{{"seed", db.seed},
         {"targetName", db.targetName},
         {"targetType", std::string(to_string(db.targetType))},
         {"startedAt", db.startedAt},
         {"mode", std::string(to_string(db.mode))},
         {"records", std::move(records)}};
  // Tag text comes from device output and may not be valid UTF-8.
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

CampaignDatabase database_from_json(std::string_view text) {
  try {
    Json j = Json::parse(text);
    CampaignDatabase db;
    db.seed = j.at("seed").get<std::uint64_t>();
    db.targetName = j.at("targetName").get<std::string>();
    const auto type = j.at("targetType").get<std::string>();
    if (type != "sim" && type != "fpga") throw Error(ErrorCode::kProtocol, "bad targetType", "database");
    db.targetType = type == "fpga" ? TargetType::kFpga : TargetType::kSim;
    db.startedAt = j.at("startedAt").get<std::string>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "random" && mode != "sweep") throw Error(ErrorCode::kProtocol, "bad mode", "database");
    db.mode = mode == "sweep" ? CampaignMode::kSweep : CampaignMode::kRandom;
    for (const Json& r : j.at("records")) {
      RunRecord rec;
      rec.iteration = r.at("iteration").get<std::uint64_t>();
      rec.appName = r.at("appName").get<std::string>();
      for (const auto& [k, v] : r.at("bindings").items()) rec.bindings.set(k, v.get<std::int64_t>());
      for (const auto& [k, v] : r.at("tags").items()) rec.tags.emplace_back(k, v.get<std::string>());
      rec.passed = r.at("passed").get<bool>();
      rec.wallTime = r.at("wallTime").get<double>();
      db.records.push_back(std::move(rec));
    }
    return db;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("malformed database: ") + e.what(), "database");
  }
}

fs::path persist(const CampaignDatabase& db, const fs::path& reportDir) {
  std::error_code ec;
  fs::create_directories(reportDir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + reportDir.string() + ": " + ec.message());

  const fs::path target = reportDir / kResultsFileName;
  const fs::path tmp = reportDir / (std::string(".") + std::string(kResultsFileName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << database_to_json(db);
    out.close();
    if (!out) {
      fs::remove(tmp, ec);
      throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot replace " + target.string());
  }
  return target;
}

CampaignDatabase load_database(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return database_from_json(buf.str());
}

}  // namespace testit
